#pragma once

#include <array>
#include <string_view>

#include "tacit/core/rng.hpp"
#include "tacit/core/types.hpp"

namespace tacit::raven {

inline constexpr double kSsimThreshold = 0.997;

// Pool order keeps the shapes whose 90-degree turns are all visible first,
// so a shape rule starting at index 0 stays rotation-sensitive.
enum Shape { triangle, pentagon, star, hexagon, square, circle };
inline constexpr std::array<std::string_view, 6> kShapeNames = {"triangle", "pentagon", "star",
                                                                 "hexagon",  "square",   "circle"};

enum Attribute { shape_attr, color_attr, size_attr, rotation_attr, count_attr };
inline constexpr int kAttributes = 5;
inline constexpr std::array<int, kAttributes> kDomain = {6, 10, 3, 4, 4};
inline constexpr std::array<std::string_view, kAttributes> kAttributeNames = {"shape", "color", "size", "rotation",
                                                                              "count"};

enum class RuleKind { constant, additive, compositional };

struct AttributeRule {
  RuleKind kind = RuleKind::constant;
  int base = 0;

  // Value index for tile (row, col).
  int value(int row, int col, int domain) const;
};

// Attribute value indices: shape, color, size (0..2), rotation (x90), count-1.
using Tile = std::array<int, kAttributes>;

struct RavenSpec {
  std::array<AttributeRule, kAttributes> rules;

  Tile tile(int row, int col) const;
  Tile answer() const { return tile(2, 2); }
};

// True when turning `shape` from rotation index a to b changes its outline.
bool rotation_visible(int shape, int a, int b);

RavenSpec build(int num_rules, bool compositional, Rng& rng);

void draw_tile(Scene& s, const Tile& t, double x0, double y0, double size);
Scene render_puzzle(const RavenSpec& spec);
Scene render_answer(const Tile& t);

}  // namespace tacit::raven
