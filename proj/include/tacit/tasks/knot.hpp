#pragma once

#include <string_view>
#include <vector>

#include "tacit/core/rng.hpp"
#include "tacit/core/types.hpp"

namespace tacit::knot {

enum class Base { circle, trefoil, figure_eight, cinquefoil, septafoil };

std::string_view base_name(Base b);
int base_crossings(Base b);  // crossings of the standard diagram

// Reidemeister-I curl at fraction `s` of the base arc length.
struct Kink {
  double s = 0;
  int sign = 1;  // which pass goes over
  int side = 1;  // +1 left of travel, -1 right
};

struct Crossing {
  Point at;
  int sign = 1;  // right-hand rule on the oriented strands
  std::size_t over = 0, under = 0;  // sample indices on the closed path
};

struct KnotSpec {
  Base base = Base::circle;
  bool mirrored = false;
  double rotation = 0;  // radians
  std::vector<Kink> kinks;
  std::vector<Point> path;  // closed, scene units
  std::vector<double> z;    // height per sample
  std::vector<Crossing> crossings;
  double max_curl_turn = 0;  // base tangent turn across the sharpest curl

  bool unknot() const { return base == Base::circle; }
};

// Closed path of `base` with `kinks`, fitted to the drawing box.
void trace(KnotSpec& spec);

// Transversal self-intersections of a closed polyline, with over/under
// from `z` and signs from the orientation.
std::vector<Crossing> find_crossings(const std::vector<Point>& path, const std::vector<double>& z);

// Diagram with exactly `crossings` crossings. Knots need at least 3; a
// smaller target always yields an unknot.
KnotSpec build(int crossings, bool unknot, Rng& rng);

Scene render_puzzle(const KnotSpec& spec);

}  // namespace tacit::knot
