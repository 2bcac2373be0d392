#include "tacit/tasks/projection.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "tacit/core/errors.hpp"
#include "tacit/scene/palette.hpp"
#include "tacit/tasks/generators.hpp"

namespace tacit::projection {

namespace {

constexpr std::array<std::array<int, 3>, 6> kFaceSteps = {
    {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}}};

struct Voxel {
  int x, y, z;
};

std::vector<Voxel> voxels(const Solid& s) {
  std::vector<Voxel> out;
  for (int z = 0; z < B; ++z) {
    for (int y = 0; y < B; ++y) {
      for (int x = 0; x < B; ++x) {
        if (s.at(x, y, z)) out.push_back({x, y, z});
      }
    }
  }
  return out;
}

std::vector<Voxel> frontier(const Solid& s) {
  std::vector<Voxel> out;
  for (int z = 0; z < B; ++z) {
    for (int y = 0; y < B; ++y) {
      for (int x = 0; x < B; ++x) {
        if (s.at(x, y, z)) continue;
        for (const auto& d : kFaceSteps) {
          if (s.at(x + d[0], y + d[1], z + d[2])) {
            out.push_back({x, y, z});
            break;
          }
        }
      }
    }
  }
  return out;
}

// Voxels whose removal keeps the solid face-connected.
std::vector<Voxel> removable(const Solid& s) {
  std::vector<Voxel> out;
  if (s.count() <= 1) return out;
  for (const Voxel& v : voxels(s)) {
    Solid t = s;
    t.set(v.x, v.y, v.z, false);
    if (t.connected()) out.push_back(v);
  }
  return out;
}

Silhouette mirror(const Silhouette& s) {
  Silhouette m{};
  for (int r = 0; r < B; ++r) {
    for (int c = 0; c < B; ++c) m[r][c] = s[r][B - 1 - c];
  }
  return m;
}

vision::ClassMatrix to_matrix(const Silhouette& s) {
  vision::ClassMatrix m(B, std::vector<int>(B));
  for (int r = 0; r < B; ++r) {
    for (int c = 0; c < B; ++c) m[r][c] = s[r][c] ? 0 : 1;
  }
  return m;
}

nlohmann::json solid_json(const Solid& s) {
  nlohmann::json out = nlohmann::json::array();
  for (const Voxel& v : voxels(s)) out.push_back({v.x, v.y, v.z});
  return out;
}

nlohmann::json silhouette_json(const Silhouette& s) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : s) {
    std::string line;
    for (bool b : row) line += b ? '#' : '.';
    rows.push_back(line);
  }
  return rows;
}

void arrow(Scene& s, Point tail, Point head, Color color, double width) {
  const double dx = head.x - tail.x, dy = head.y - tail.y, len = std::hypot(dx, dy);
  const double ux = dx / len, uy = dy / len, h = 3.2 * width;
  const Point base{head.x - ux * h, head.y - uy * h};
  s.line(tail, base, color, width);
  s.polygon({head, {base.x - uy * h * 0.6, base.y + ux * h * 0.6}, {base.x + uy * h * 0.6, base.y - ux * h * 0.6}},
            color);
}

class OrthoTask final : public TaskSpec {
 public:
  explicit OrthoTask(OrthoSpec spec) : spec_(spec) {}

  VerificationResult verify(const RasterImage& candidate, const VerifyOptions&) const override {
    return judge_ortho(spec_, vision::sample_grid(candidate, silhouette_geometry(), silhouette_classes(),
                                                  vision::SampleMode::center_patch_majority));
  }

  nlohmann::json structure() const override {
    return {{"lattice", B},
            {"voxels", solid_json(spec_.solid)},
            {"view", view_name(spec_.view)},
            {"silhouette", silhouette_json(project(spec_.solid, spec_.view))}};
  }

  nlohmann::json geometry() const override { return {{"grid", silhouette_geometry()}}; }

 private:
  OrthoSpec spec_;
};

class IsoRecTask final : public TaskSpec {
 public:
  explicit IsoRecTask(IsoRecSpec spec) : spec_(spec) {}

  VerificationResult verify(const RasterImage& candidate, const VerifyOptions& options) const override {
    const int res = options.reference_resolution.value_or(candidate.width);
    if (candidate.width != res || candidate.height != res) {
      return VerificationResult::fail("dimension mismatch",
                                      {{"diagnosis", "dimension"}, {"width", candidate.width}, {"expected", res}});
    }
    const RasterImage truth = rasterize_unchecked(render_isorec_answer(spec_.solid), res);
    const double score = vision::ssim(candidate, truth);
    nlohmann::json d = {{"ssim", score}, {"threshold", kIsoSsimThreshold}};
    if (score >= kIsoSsimThreshold) return VerificationResult::ok(d);
    return VerificationResult::fail("SSIM below threshold", d);
  }

  nlohmann::json structure() const override {
    nlohmann::json views = nlohmann::json::object();
    for (View v : kViews) views[std::string(view_name(v))] = silhouette_json(project(spec_.solid, v));
    return {{"lattice", B},
            {"voxels", solid_json(spec_.solid)},
            {"removed", solid_json(Solid{spec_.maximal.bits & ~spec_.solid.bits})},
            {"views", views}};
  }

 private:
  IsoRecSpec spec_;
};

}  // namespace

void Solid::set(int x, int y, int z, bool on) {
  const std::uint64_t bit = std::uint64_t{1} << index(x, y, z);
  bits = on ? bits | bit : bits & ~bit;
}

int Solid::count() const { return std::popcount(bits); }

bool Solid::connected() const {
  if (bits == 0) return false;
  Solid seen;
  std::vector<Voxel> stack;
  const int first = std::countr_zero(bits);
  stack.push_back({first % B, first / B % B, first / (B * B)});
  seen.set(stack[0].x, stack[0].y, stack[0].z);
  while (!stack.empty()) {
    const Voxel v = stack.back();
    stack.pop_back();
    for (const auto& d : kFaceSteps) {
      const int x = v.x + d[0], y = v.y + d[1], z = v.z + d[2];
      if (at(x, y, z) && !seen.at(x, y, z)) {
        seen.set(x, y, z);
        stack.push_back({x, y, z});
      }
    }
  }
  return seen.bits == bits;
}

std::string_view view_name(View v) {
  switch (v) {
    case View::front: return "front";
    case View::top: return "top";
    case View::side: return "side";
  }
  return "?";
}

Silhouette project(const Solid& s, View v) {
  Silhouette out{};
  for (const Voxel& p : voxels(s)) {
    switch (v) {
      case View::front: out[B - 1 - p.z][p.x] = true; break;
      case View::top: out[p.y][p.x] = true; break;
      case View::side: out[B - 1 - p.z][B - 1 - p.y] = true; break;
    }
  }
  return out;
}

Solid maximal(const Silhouette& front, const Silhouette& top, const Silhouette& side) {
  Solid s;
  for (int z = 0; z < B; ++z) {
    for (int y = 0; y < B; ++y) {
      for (int x = 0; x < B; ++x) {
        if (front[B - 1 - z][x] && top[y][x] && side[B - 1 - z][B - 1 - y]) s.set(x, y, z);
      }
    }
  }
  return s;
}

Solid closure(const Solid& s) {
  return maximal(project(s, View::front), project(s, View::top), project(s, View::side));
}

Solid grow(int count, Rng& rng) {
  Solid s;
  s.set(rng.uniform_int(0, B - 1), rng.uniform_int(0, B - 1), rng.uniform_int(0, B - 1));
  while (s.count() < count) {
    const Voxel v = rng.pick(frontier(s));
    s.set(v.x, v.y, v.z);
  }
  return s;
}

Solid rotate_z(const Solid& s) {
  Solid r;
  for (const Voxel& v : voxels(s)) r.set(B - 1 - v.y, v.x, v.z);
  return r;
}

Point IsoFrame::at(double x, double y, double z) const {
  return {cx + (x - y) * s, cy + (x + y) * s / 2 - z * s};
}

void draw_solid(Scene& scene, const Solid& solid, const IsoFrame& f) {
  const double stroke = 0.035 * f.s;
  // Floor outline for orientation.
  for (int i = 0; i <= B; ++i) {
    scene.line(f.at(i, 0, 0), f.at(i, B, 0), palette::neutral_gray, stroke * 0.6);
    scene.line(f.at(0, i, 0), f.at(B, i, 0), palette::neutral_gray, stroke * 0.6);
  }
  auto vs = voxels(solid);
  std::stable_sort(vs.begin(), vs.end(), [](const Voxel& a, const Voxel& b) {
    return a.x + a.y + a.z < b.x + b.y + b.z;
  });
  for (const Voxel& v : vs) {
    const double x = v.x, y = v.y, z = v.z;
    if (!solid.at(v.x, v.y + 1, v.z)) {
      scene.polygon({f.at(x, y + 1, z), f.at(x + 1, y + 1, z), f.at(x + 1, y + 1, z + 1), f.at(x, y + 1, z + 1)},
                    palette::iso_left, palette::wall_black, stroke);
    }
    if (!solid.at(v.x + 1, v.y, v.z)) {
      scene.polygon({f.at(x + 1, y, z), f.at(x + 1, y + 1, z), f.at(x + 1, y + 1, z + 1), f.at(x + 1, y, z + 1)},
                    palette::iso_right, palette::wall_black, stroke);
    }
    if (!solid.at(v.x, v.y, v.z + 1)) {
      scene.polygon({f.at(x, y, z + 1), f.at(x + 1, y, z + 1), f.at(x + 1, y + 1, z + 1), f.at(x, y + 1, z + 1)},
                    palette::iso_top, palette::wall_black, stroke);
    }
  }
}

vision::GridGeometry silhouette_geometry() { return {100, 100, 200, 200, B, B}; }

vision::ClassSet silhouette_classes() {
  vision::ClassSet set;
  set.classes = {{0, palette::filled_navy, false}, {1, palette::background_white, false}};
  return set;
}

namespace {

void draw_grid(Scene& s, const Silhouette& sil, const vision::GridGeometry& g) {
  const double w = g.cell_w * 0.03;
  for (int r = 0; r < B; ++r) {
    for (int c = 0; c < B; ++c) {
      if (sil[r][c]) s.rect(g.x0 + c * g.cell_w, g.y0 + r * g.cell_h, g.cell_w, g.cell_h, palette::filled_navy);
    }
  }
  for (int i = 1; i < B; ++i) {
    s.line({g.x0 + i * g.cell_w, g.y0}, {g.x0 + i * g.cell_w, g.y0 + B * g.cell_h}, palette::wall_black, w);
    s.line({g.x0, g.y0 + i * g.cell_h}, {g.x0 + B * g.cell_w, g.y0 + i * g.cell_h}, palette::wall_black, w);
  }
  s.rect(g.x0, g.y0, B * g.cell_w, B * g.cell_h, std::nullopt, palette::wall_black, 2 * w);
}

}  // namespace

Scene render_silhouette(const Silhouette& sil) {
  Scene s;
  draw_grid(s, sil, silhouette_geometry());
  return s;
}

VerificationResult judge_ortho(const OrthoSpec& spec, const vision::ClassMatrix& sampled) {
  const Silhouette truth = project(spec.solid, spec.view);
  Silhouette cand{};
  int diff = 0;
  bool subset = true, superset = true;
  for (int r = 0; r < B; ++r) {
    for (int c = 0; c < B; ++c) {
      if (sampled[r][c] < 0) {
        return VerificationResult::fail("unreadable cell", {{"diagnosis", "unreadable"}, {"cell", {r, c}}});
      }
      cand[r][c] = sampled[r][c] == 0;
      diff += cand[r][c] != truth[r][c];
      if (cand[r][c] && !truth[r][c]) subset = false;
      if (!cand[r][c] && truth[r][c]) superset = false;
    }
  }
  nlohmann::json d = {{"diff_cells", diff}, {"total_cells", B * B}};
  if (diff == 0) return VerificationResult::ok(d);
  std::string diagnosis = "cells";
  for (View v : kViews) {
    if (v != spec.view && cand == project(spec.solid, v)) {
      diagnosis = "wrong_axis";
      d["matches_view"] = view_name(v);
      break;
    }
  }
  if (diagnosis == "cells") {
    if (cand == mirror(truth)) diagnosis = "mirrored";
    else if (subset) diagnosis = "missing";
    else if (superset) diagnosis = "extra";
  }
  d["diagnosis"] = diagnosis;
  return VerificationResult::fail(std::to_string(diff) + "/" + std::to_string(B * B) + " cells differ", d);
}

OrthoSpec build_ortho(int count, int concavities, Rng& rng) {
  for (int attempt = 0; attempt < 200; ++attempt) {
    OrthoSpec spec;
    spec.before_concavities = grow(count + concavities, rng);
    spec.solid = spec.before_concavities;
    bool ok = true;
    for (int i = 0; i < concavities && ok; ++i) {
      const auto cand = removable(spec.solid);
      ok = !cand.empty();
      if (ok) {
        const Voxel v = rng.pick(cand);
        spec.solid.set(v.x, v.y, v.z, false);
      }
    }
    if (!ok) continue;
    if (concavities > 0) {
      bool changed = false;
      for (View v : kViews) changed |= project(spec.solid, v) != project(spec.before_concavities, v);
      if (!changed) continue;
    }
    spec.view = kViews[rng.index(kViews.size())];
    const Silhouette target = project(spec.solid, spec.view);
    if (mirror(target) == target) continue;
    bool distinct = false;
    for (View v : kViews) distinct |= v != spec.view && project(spec.solid, v) != target;
    if (distinct) return spec;
  }
  throw GenerationRetry("ortho_projection: no asymmetric solid");
}

Scene render_ortho_puzzle(const OrthoSpec& spec) {
  Scene s;
  const IsoFrame f{500, 540, 70};
  draw_solid(s, spec.solid, f);
  constexpr double h = B / 2.0;
  Point tail, head, label;
  switch (spec.view) {
    case View::front:
      tail = f.at(h, B + 3.2, h), head = f.at(h, B + 0.7, h), label = f.at(h, B + 3.2, h - 1.3);
      break;
    case View::top:
      tail = f.at(h, h, B + 2.6), head = f.at(h, h, B + 0.4), label = f.at(h + 2.4, h, B + 2.3);
      break;
    case View::side:
      tail = f.at(B + 3.2, h, h), head = f.at(B + 0.7, h, h), label = f.at(B + 3.2, h, h - 1.3);
      break;
  }
  arrow(s, tail, head, palette::mark_red, 12);
  std::string name(view_name(spec.view));
  std::transform(name.begin(), name.end(), name.begin(), [](char c) { return static_cast<char>(c - 'a' + 'A'); });
  s.text(label.x, label.y, 48, name, palette::mark_red);
  return s;
}

IsoRecSpec build_isorec(int count, int ambiguity, Rng& rng) {
  const int target = count + ambiguity;
  for (int attempt = 0; attempt < 500; ++attempt) {
    // Grow through view-closed solids so the start is the unique maximal
    // reconstruction of its own three views.
    Solid s;
    s.set(rng.uniform_int(0, B - 1), rng.uniform_int(0, B - 1), rng.uniform_int(0, B - 1));
    while (s.count() < target) {
      const Voxel v = rng.pick(frontier(s));
      s.set(v.x, v.y, v.z);
      s = closure(s);
    }
    if (s.count() != target || !s.connected()) continue;
    IsoRecSpec spec{s, s};
    bool ok = true;
    for (int i = 0; i < ambiguity && ok; ++i) {
      std::vector<Voxel> redundant;
      for (const Voxel& v : removable(spec.solid)) {
        Solid t = spec.solid;
        t.set(v.x, v.y, v.z, false);
        if (closure(t) == spec.maximal) redundant.push_back(v);
      }
      ok = !redundant.empty();
      if (ok) {
        const Voxel v = rng.pick(redundant);
        spec.solid.set(v.x, v.y, v.z, false);
      }
    }
    if (ok) return spec;
  }
  throw GenerationRetry("iso_reconstruction: no solid with removable redundant voxels");
}

Scene render_isorec_puzzle(const IsoRecSpec& spec) {
  Scene s;
  const vision::GridGeometry top{100, 70, 85, 85, B, B}, front{100, 520, 85, 85, B, B}, side{540, 520, 85, 85, B, B};
  draw_grid(s, project(spec.solid, View::top), top);
  draw_grid(s, project(spec.solid, View::front), front);
  draw_grid(s, project(spec.solid, View::side), side);
  s.text(270, 460, 40, "TOP", palette::wall_black);
  s.text(270, 910, 40, "FRONT", palette::wall_black);
  s.text(710, 910, 40, "SIDE", palette::wall_black);
  // Orientation key: one cube with its faces named.
  const IsoFrame big{720, 200, 150};
  const double w = 0.035 * big.s;
  s.polygon({big.at(0, 1, 0), big.at(1, 1, 0), big.at(1, 1, 1), big.at(0, 1, 1)}, palette::iso_left, palette::wall_black, w);
  s.polygon({big.at(1, 0, 0), big.at(1, 1, 0), big.at(1, 1, 1), big.at(1, 0, 1)}, palette::iso_right, palette::wall_black, w);
  s.polygon({big.at(0, 0, 1), big.at(1, 0, 1), big.at(1, 1, 1), big.at(0, 1, 1)}, palette::iso_top, palette::wall_black, w);
  const Point tf = big.at(0.5, 0.5, 1), ff = big.at(0.5, 1, 0.5), sf = big.at(1, 0.5, 0.5);
  s.text(tf.x, tf.y, 40, "T", palette::wall_black);
  s.text(ff.x, ff.y, 40, "F", palette::wall_black);
  s.text(sf.x, sf.y, 40, "S", palette::background_white);
  return s;
}

Scene render_isorec_answer(const Solid& solid) {
  Scene s;
  draw_solid(s, solid, IsoFrame{500, 500, 100});
  return s;
}

}  // namespace tacit::projection

namespace tacit::tasks {

PuzzleInstance generate_ortho(const Params& params, Rng& rng) {
  using namespace tacit::projection;
  const OrthoSpec spec = build_ortho(static_cast<int>(params.at("faces")), static_cast<int>(params.at("concavities")), rng);
  const Silhouette truth = project(spec.solid, spec.view);
  PuzzleInstance inst;
  inst.puzzle = render_ortho_puzzle(spec);
  inst.solution = render_silhouette(truth);

  auto add = [&](const Silhouette& sil, std::string violation, std::string diag, nlohmann::json note) {
    inst.distractors.push_back({render_silhouette(sil), std::move(violation), std::move(diag), std::move(note)});
  };
  auto pick_cell = [&](bool filled, const std::string& diag) -> std::optional<std::pair<int, int>> {
    std::vector<std::pair<int, int>> cells;
    for (int r = 0; r < B; ++r) {
      for (int c = 0; c < B; ++c) {
        if (truth[r][c] == filled) cells.push_back({r, c});
      }
    }
    rng.shuffle(cells);
    for (const auto& [r, c] : cells) {
      Silhouette t = truth;
      t[r][c] = !filled;
      if (judge_ortho(spec, to_matrix(t)).diagnosis() == diag) return std::pair{r, c};
    }
    return std::nullopt;
  };

  std::vector<View> others;
  for (View v : kViews) {
    if (v != spec.view && project(spec.solid, v) != truth) others.push_back(v);
  }
  const View wrong = rng.pick(others);
  add(project(spec.solid, wrong), "wrong_axis", "wrong_axis", {{"view", view_name(wrong)}});

  const auto gone = pick_cell(true, "missing");
  const auto extra = pick_cell(false, "extra");
  if (!gone || !extra) throw GenerationRetry("ortho_projection: no single-cell distractor");
  Silhouette t = truth;
  t[gone->first][gone->second] = false;
  add(t, "missing_feature", "missing", {{"cell", {gone->first, gone->second}}});
  t = truth;
  t[extra->first][extra->second] = true;
  add(t, "extra_feature", "extra", {{"cell", {extra->first, extra->second}}});
  add(mirror(truth), "mirrored", "mirrored", nlohmann::json::object());

  inst.spec = std::make_shared<OrthoTask>(spec);
  return inst;
}

PuzzleInstance generate_isorec(const Params& params, Rng& rng) {
  using namespace tacit::projection;
  const IsoRecSpec spec = build_isorec(static_cast<int>(params.at("faces")), static_cast<int>(params.at("ambiguity")), rng);
  constexpr int kGate = 512;
  const RasterImage truth = rasterize_unchecked(render_isorec_answer(spec.solid), kGate);
  auto separable = [&](const Solid& s) {
    return s != spec.solid && s.connected() &&
           vision::ssim(rasterize_unchecked(render_isorec_answer(s), kGate), truth) < kIsoSsimThreshold;
  };

  PuzzleInstance inst;
  inst.puzzle = render_isorec_puzzle(spec);
  inst.solution = render_isorec_answer(spec.solid);
  auto add = [&](std::optional<Solid> s, std::string violation, nlohmann::json note) {
    if (!s) throw GenerationRetry("iso_reconstruction: no separable " + violation + " distractor");
    inst.distractors.push_back({render_isorec_answer(*s), std::move(violation), "", std::move(note)});
  };
  auto first = [&](std::vector<Solid> cands) -> std::optional<Solid> {
    rng.shuffle(cands);
    for (const Solid& s : cands) {
      if (separable(s)) return s;
    }
    return std::nullopt;
  };

  const auto vs = voxels(spec.solid);
  // Slide one voxel front-to-back within its column of depth.
  std::vector<Solid> depth, fewer, more, turned;
  for (const Voxel& v : vs) {
    for (int y = 0; y < B; ++y) {
      if (spec.solid.at(v.x, y, v.z)) continue;
      Solid s = spec.solid;
      s.set(v.x, v.y, v.z, false);
      s.set(v.x, y, v.z);
      depth.push_back(s);
    }
    Solid s = spec.solid;
    s.set(v.x, v.y, v.z, false);
    fewer.push_back(s);
  }
  for (const Voxel& v : frontier(spec.solid)) {
    Solid s = spec.solid;
    s.set(v.x, v.y, v.z);
    more.push_back(s);
  }
  Solid r = spec.solid;
  for (int q = 1; q < 4; ++q) turned.push_back(r = rotate_z(r));

  add(first(depth), "wrong_depth", nlohmann::json::object());
  add(first(fewer), "missing_face", nlohmann::json::object());
  add(first(more), "extra_volume", nlohmann::json::object());
  add(first(turned), "rotated", nlohmann::json::object());
  inst.spec = std::make_shared<IsoRecTask>(spec);
  return inst;
}

}  // namespace tacit::tasks
