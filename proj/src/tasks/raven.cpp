#include "tacit/tasks/raven.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "tacit/core/errors.hpp"
#include "tacit/scene/palette.hpp"
#include "tacit/tasks/generators.hpp"
#include "tacit/vision/vision.hpp"

namespace tacit::raven {

namespace {

constexpr std::array<double, 3> kSizeFrac = {0.17, 0.25, 0.33};
constexpr double kGateResolution = 512;

std::string_view kind_name(RuleKind k) {
  switch (k) {
    case RuleKind::constant: return "constant";
    case RuleKind::additive: return "additive";
    case RuleKind::compositional: return "compositional";
  }
  return "?";
}

std::vector<Point> outline(int shape, double cx, double cy, double r, int rotation) {
  int k = 0;
  double offset = -90.0;
  switch (shape) {
    case triangle: k = 3; break;
    case pentagon: k = 5; break;
    case hexagon: k = 6; offset = 0.0; break;
    case square: k = 4; offset = 45.0; break;
    case star: k = 10; break;
    default: return {};
  }
  std::vector<Point> pts;
  for (int i = 0; i < k; ++i) {
    const double a = (offset + 90.0 * rotation + 360.0 * i / k) * std::numbers::pi / 180.0;
    const double rr = (shape == star && i % 2) ? r * 0.45 : r;
    pts.push_back({cx + rr * std::cos(a), cy + rr * std::sin(a)});
  }
  return pts;
}

// Slot centers (fractions of the tile) for 1..4 copies.
std::vector<Point> slots(int count) {
  switch (count) {
    case 1: return {{0.5, 0.5}};
    case 2: return {{0.28, 0.5}, {0.72, 0.5}};
    case 3: return {{0.5, 0.28}, {0.28, 0.72}, {0.72, 0.72}};
    default: return {{0.28, 0.28}, {0.72, 0.28}, {0.28, 0.72}, {0.72, 0.72}};
  }
}

nlohmann::json tile_json(const Tile& t) {
  return {{"shape", kShapeNames[t[shape_attr]]}, {"color", t[color_attr]},       {"size", t[size_attr]},
          {"rotation", 90 * t[rotation_attr]}, {"count", t[count_attr] + 1}};
}

class RavenTask final : public TaskSpec {
 public:
  explicit RavenTask(RavenSpec spec) : spec_(spec) {}

  VerificationResult verify(const RasterImage& candidate, const VerifyOptions& options) const override {
    const int res = options.reference_resolution.value_or(candidate.width);
    if (candidate.width != res || candidate.height != res) {
      return VerificationResult::fail("dimension mismatch",
                                      {{"diagnosis", "dimension"}, {"width", candidate.width}, {"expected", res}});
    }
    const RasterImage truth = rasterize_unchecked(render_answer(spec_.answer()), res);
    const double score = vision::ssim(candidate, truth);
    nlohmann::json d = {{"ssim", score}, {"threshold", kSsimThreshold}};
    if (score >= kSsimThreshold) return VerificationResult::ok(d);
    return VerificationResult::fail("SSIM below threshold", d);
  }

  nlohmann::json structure() const override {
    nlohmann::json rules = nlohmann::json::object();
    for (int a = 0; a < kAttributes; ++a) {
      rules[std::string(kAttributeNames[a])] = {{"kind", kind_name(spec_.rules[a].kind)}, {"base", spec_.rules[a].base}};
    }
    nlohmann::json tiles = nlohmann::json::array();
    for (int r = 0; r < 3; ++r) {
      for (int c = 0; c < 3; ++c) tiles.push_back(tile_json(spec_.tile(r, c)));
    }
    return {{"rules", rules}, {"tiles", tiles}, {"missing", {2, 2}}};
  }

 private:
  RavenSpec spec_;
};

}  // namespace

int AttributeRule::value(int row, int col, int domain) const {
  switch (kind) {
    case RuleKind::constant: return base;
    case RuleKind::additive: return (base + col) % domain;
    case RuleKind::compositional: return (base + (row + col) % 3) % domain;
  }
  return base;
}

Tile RavenSpec::tile(int row, int col) const {
  Tile t{};
  for (int a = 0; a < kAttributes; ++a) t[a] = rules[a].value(row, col, kDomain[a]);
  return t;
}

bool rotation_visible(int shape, int a, int b) {
  const int d = ((b - a) % 4 + 4) % 4;
  if (d == 0) return false;
  switch (shape) {
    case triangle:
    case pentagon:
    case star: return true;
    case hexagon: return d % 2 == 1;
    default: return false;
  }
}

RavenSpec build(int num_rules, bool compositional, Rng& rng) {
  std::array<int, kAttributes> order = {0, 1, 2, 3, 4};
  rng.shuffle(order);
  RavenSpec spec;
  for (int i = 0; i < num_rules; ++i) {
    const bool comp = compositional && (i == 0 || rng.bernoulli(0.5));
    spec.rules[order[i]].kind = comp ? RuleKind::compositional : RuleKind::additive;
  }
  for (int a = 0; a < kAttributes; ++a) spec.rules[a].base = static_cast<int>(rng.index(kDomain[a]));
  // A changing rotation needs shapes whose turns are visible.
  if (spec.rules[rotation_attr].kind != RuleKind::constant) {
    auto& sh = spec.rules[shape_attr];
    sh.base = sh.kind == RuleKind::constant ? static_cast<int>(rng.index(3)) : 0;
  }
  return spec;
}

void draw_tile(Scene& s, const Tile& t, double x0, double y0, double size) {
  s.rect(x0, y0, size, size, std::nullopt, palette::wall_black, size * 0.012);
  const int count = t[count_attr] + 1;
  const double r = kSizeFrac[t[size_attr]] * size * (count == 1 ? 1.0 : 0.55);
  const Color fill = palette::symbol[t[color_attr]];
  const double stroke = size * 0.01;
  for (const Point& p : slots(count)) {
    const double cx = x0 + p.x * size, cy = y0 + p.y * size;
    if (t[shape_attr] == circle) {
      s.circle(cx, cy, r, fill, palette::wall_black, stroke);
    } else {
      s.polygon(outline(t[shape_attr], cx, cy, r, t[rotation_attr]), fill, palette::wall_black, stroke);
    }
  }
}

Scene render_puzzle(const RavenSpec& spec) {
  Scene s;
  const double tile = 290, gap = 15, x0 = (kCanvasUnits - 3 * tile - 2 * gap) / 2;
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) {
      const double x = x0 + c * (tile + gap), y = x0 + r * (tile + gap);
      if (r == 2 && c == 2) {
        s.rect(x, y, tile, tile, std::nullopt, palette::wall_black, tile * 0.012);
        s.text(x + tile / 2, y + tile / 2, tile * 0.5, "?", palette::mark_red);
      } else {
        draw_tile(s, spec.tile(r, c), x, y, tile);
      }
    }
  }
  return s;
}

Scene render_answer(const Tile& t) {
  Scene s;
  draw_tile(s, t, 50, 50, 900);
  return s;
}

}  // namespace tacit::raven

namespace tacit::tasks {

PuzzleInstance generate_raven(const Params& params, Rng& rng) {
  using namespace tacit::raven;
  const int num_rules = static_cast<int>(params.at("rules"));
  const bool comp = params.at("complexity") >= 1;
  const RavenSpec spec = build(num_rules, comp, rng);
  const Tile answer = spec.answer();
  const RasterImage truth = rasterize_unchecked(render_answer(answer), kGateResolution);

  // Tries the candidate values in random order; keeps the first that the
  // SSIM gate separates from the answer.
  auto perturb = [&](int attr, std::vector<int> values) -> std::optional<Tile> {
    rng.shuffle(values);
    for (int v : values) {
      Tile t = answer;
      t[attr] = v;
      if (vision::ssim(rasterize_unchecked(render_answer(t), kGateResolution), truth) < kSsimThreshold) return t;
    }
    return std::nullopt;
  };
  auto others = [&](int attr, auto keep) {
    std::vector<int> v;
    for (int i = 0; i < kDomain[attr]; ++i) {
      if (i != answer[attr] && keep(i)) v.push_back(i);
    }
    return v;
  };
  auto any = [](int) { return true; };

  PuzzleInstance inst;
  inst.puzzle = render_puzzle(spec);
  inst.solution = render_answer(answer);
  auto add = [&](std::optional<Tile> t, std::string violation, nlohmann::json note = nlohmann::json::object()) {
    if (!t) throw GenerationRetry("raven: no separable " + violation + " distractor");
    inst.distractors.push_back({render_answer(*t), std::move(violation), "", std::move(note)});
  };

  add(perturb(shape_attr, others(shape_attr, any)), "wrong_shape");
  const double l0 = palette::luma(palette::symbol[answer[color_attr]]);
  add(perturb(color_attr, others(color_attr, [&](int i) { return std::abs(palette::luma(palette::symbol[i]) - l0) >= 40; })),
      "wrong_color");
  const auto turns = others(rotation_attr, [&](int i) { return rotation_visible(answer[shape_attr], answer[rotation_attr], i); });
  if (!turns.empty()) {
    add(perturb(rotation_attr, turns), "wrong_rotation");
  } else {
    add(perturb(size_attr, others(size_attr, any)), "wrong_size",
        {{"substitutes", "wrong_rotation"}, {"reason", std::string(kShapeNames[answer[shape_attr]]) + " has no visible turn"}});
  }
  add(perturb(count_attr, others(count_attr, any)), "wrong_count");

  inst.spec = std::make_shared<RavenTask>(spec);
  return inst;
}

}  // namespace tacit::tasks
