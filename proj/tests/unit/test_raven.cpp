#include <doctest.h>

#include "tacit/core/registry.hpp"
#include "tacit/scene/raster.hpp"
#include "tacit/tasks/badge.hpp"
#include "tacit/tasks/raven.hpp"
#include "tacit/vision/vision.hpp"

using namespace tacit;

namespace {

// Per attribute, a row is constant, steps by +1, or is a cyclic shift of
// the row above.
int changing_attributes(const nlohmann::json& tiles) {
  int changing = 0;
  for (const char* a : {"shape", "color", "size", "rotation", "count"}) {
    bool constant = true;
    for (int i = 1; i < 9; ++i) constant = constant && tiles[i][a] == tiles[0][a];
    changing += !constant;
  }
  return changing;
}

}  // namespace

TEST_CASE("rule values follow their definitions") {
  using raven::AttributeRule;
  using raven::RuleKind;
  const AttributeRule k{RuleKind::constant, 2}, add{RuleKind::additive, 5}, comp{RuleKind::compositional, 1};
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) {
      CHECK(k.value(r, c, 6) == 2);
      CHECK(add.value(r, c, 6) == (5 + c) % 6);
      CHECK(comp.value(r, c, 4) == (1 + (r + c) % 3) % 4);
    }
  }
}

TEST_CASE("generated matrices change exactly the requested number of attributes") {
  for (Difficulty d : kDifficulties) {
    for (std::uint64_t seed = 1; seed <= 6; ++seed) {
      const auto inst = generate(2, d, seed);
      const auto s = inst.spec->structure();
      CHECK(changing_attributes(s["tiles"]) == static_cast<int>(inst.params.at("rules")));
      CHECK(inst.distractors.size() == 4);
    }
  }
}

TEST_CASE("rotation visibility matches rendered pixels") {
  for (int shape = 0; shape < 6; ++shape) {
    for (int b = 1; b < 4; ++b) {
      CAPTURE(raven::kShapeNames[shape]);
      CAPTURE(b);
      const raven::Tile ta{shape, 3, 2, 0, 0}, tb{shape, 3, 2, b, 0};
      const auto ia = rasterize(raven::render_answer(ta), 512), ib = rasterize(raven::render_answer(tb), 512);
      // Regular polygons turned by a symmetry map onto themselves up to
      // antialiasing noise; a visible turn moves many pixels.
      const double score = vision::ssim(ia, ib);
      if (raven::rotation_visible(shape, 0, b)) {
        CHECK(score < 0.99);
      } else {
        CHECK(score > 0.999);
      }
    }
  }
}

TEST_CASE("badges: every variant reads as its answer") {
  for (bool yes : {true, false}) {
    for (int v = 0; v < badge::kVariants; ++v) {
      const auto img = rasterize(badge::render(yes, v), 512);
      CHECK(badge::verify(img, yes).passed);
      CHECK_FALSE(badge::verify(img, !yes).passed);
    }
  }
  const RasterImage blank(512, 512, Color{255, 255, 255});
  const auto r = badge::verify(blank, true);
  CHECK_FALSE(r.passed);
  CHECK(r.diagnosis() == "no_answer");
}
