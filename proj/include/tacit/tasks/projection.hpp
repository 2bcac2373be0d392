#pragma once

#include <array>
#include <cstdint>
#include <string_view>

#include "tacit/core/rng.hpp"
#include "tacit/core/types.hpp"
#include "tacit/vision/vision.hpp"

namespace tacit::projection {

inline constexpr int B = 4;  // lattice side
inline constexpr double kIsoSsimThreshold = 0.99999;

// x to the right, y toward the viewer's left (front), z up.
struct Solid {
  std::uint64_t bits = 0;

  static constexpr int index(int x, int y, int z) { return x + B * y + B * B * z; }
  static constexpr bool inside(int x, int y, int z) { return x >= 0 && y >= 0 && z >= 0 && x < B && y < B && z < B; }
  bool at(int x, int y, int z) const { return inside(x, y, z) && ((bits >> index(x, y, z)) & 1u); }
  void set(int x, int y, int z, bool on = true);
  int count() const;
  bool connected() const;  // face-connected, non-empty

  bool operator==(const Solid&) const = default;
};

// front: seen from +y, row = B-1-z, col = x
// top:   seen from +z, row = y,     col = x   (front edge at the bottom)
// side:  seen from +x, row = B-1-z, col = B-1-y
enum class View { front, top, side };
inline constexpr std::array<View, 3> kViews = {View::front, View::top, View::side};
std::string_view view_name(View v);

using Silhouette = std::array<std::array<bool, B>, B>;  // [row][col]

Silhouette project(const Solid& s, View v);

// Largest solid whose views stay within the given ones: a voxel is kept iff
// all three of its projected cells are filled.
Solid maximal(const Silhouette& front, const Silhouette& top, const Silhouette& side);
Solid closure(const Solid& s);  // maximal(project(s, .)...)

// Face-adjacent random accretion from a random seed voxel.
Solid grow(int voxels, Rng& rng);

Solid rotate_z(const Solid& s);  // quarter turn about the vertical axis

// ---- rendering ----------------------------------------------------------

struct IsoFrame {
  double cx = 500, cy = 500, s = 80;  // origin and unit edge length
  Point at(double x, double y, double z) const;
};

void draw_solid(Scene& scene, const Solid& s, const IsoFrame& f);

vision::GridGeometry silhouette_geometry();
vision::ClassSet silhouette_classes();  // 0 filled, 1 empty
Scene render_silhouette(const Silhouette& sil);

// ---- tasks ----------------------------------------------------------------

struct OrthoSpec {
  Solid solid;
  Solid before_concavities;
  View view = View::front;
};

// Exact match passes; otherwise the first of: wrong_axis (matches another
// view), mirrored, missing (strict subset), extra (strict superset), cells.
VerificationResult judge_ortho(const OrthoSpec& spec, const vision::ClassMatrix& sampled);

OrthoSpec build_ortho(int voxels, int concavities, Rng& rng);
Scene render_ortho_puzzle(const OrthoSpec& spec);

struct IsoRecSpec {
  Solid solid;
  Solid maximal;  // before redundant voxels were removed
};

IsoRecSpec build_isorec(int voxels, int ambiguity, Rng& rng);
Scene render_isorec_puzzle(const IsoRecSpec& spec);
Scene render_isorec_answer(const Solid& s);

}  // namespace tacit::projection
