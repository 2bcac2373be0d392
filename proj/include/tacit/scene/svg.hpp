#pragma once

#include <string>
#include <string_view>

#include "tacit/scene/scene.hpp"

namespace tacit {

// Standalone SVG 1.1 document, one element per display-list item in order.
// Numbers use shortest round-trip formatting, so parse_svg(emit_svg(s)) == s.
std::string emit_svg(const Scene& scene);

// Reads back the element subset emit_svg writes (rect, circle, line,
// polyline, polygon, text). Throws ValidationError on anything else.
Scene parse_svg(std::string_view svg);

}  // namespace tacit
