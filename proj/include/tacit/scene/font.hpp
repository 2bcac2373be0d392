#pragma once

#include <vector>

#include "tacit/scene/scene.hpp"

// Embedded monospace stroke font: digits, A-Z (lowercase folds to upper) and
// a few symbols. Unknown characters render as '?'.
namespace tacit::font {

double stroke_width(double size);

// Polylines (scene units) tracing the text, centered on (text.x, text.y).
std::vector<std::vector<Point>> layout(const Text& text);

}  // namespace tacit::font
