#include "tacit/tasks/badge.hpp"

#include "tacit/scene/palette.hpp"
#include "tacit/vision/vision.hpp"

namespace tacit::badge {

namespace {

void glyph(Scene& s, bool yes, double cx, double cy, double r, double width) {
  const Color white = palette::background_white;
  if (yes) {
    s.polyline({{cx - 0.5 * r, cy}, {cx - 0.12 * r, cy + 0.4 * r}, {cx + 0.55 * r, cy - 0.4 * r}}, white, width);
  } else {
    s.line({cx - 0.42 * r, cy - 0.42 * r}, {cx + 0.42 * r, cy + 0.42 * r}, white, width);
    s.line({cx - 0.42 * r, cy + 0.42 * r}, {cx + 0.42 * r, cy - 0.42 * r}, white, width);
  }
}

}  // namespace

Scene render(bool yes, int variant) {
  Scene s;
  const Color c = yes ? palette::badge_green : palette::badge_red;
  constexpr double cx = kCanvasUnits / 2, cy = kCanvasUnits / 2;
  switch (variant % kVariants) {
    case 0:
      s.circle(cx, cy, 450, c);
      glyph(s, yes, cx, cy, 450, 90);
      break;
    case 1:  // thin glyph, black rim
      s.circle(cx, cy, 440, c, palette::wall_black, 20);
      glyph(s, yes, cx, cy, 440, 45);
      break;
    case 2:  // square plate
      s.rect(80, 80, 840, 840, c);
      glyph(s, yes, cx, cy, 420, 110);
      break;
    default:  // ring with a small glyph disc
      s.circle(cx, cy, 450, c);
      s.circle(cx, cy, 300, palette::background_white);
      s.circle(cx, cy, 220, c);
      glyph(s, yes, cx, cy, 220, 50);
      break;
  }
  return s;
}

VerificationResult verify(const RasterImage& candidate, bool expected) {
  const auto counts = vision::count_answer_pixels(candidate);
  nlohmann::json d = {{"green", counts.green}, {"red", counts.red}, {"expected", expected ? "yes" : "no"}};
  if (counts.green == 0 && counts.red == 0) {
    d["diagnosis"] = "no_answer";
    return VerificationResult::fail("no answer detected", d);
  }
  const bool answer = counts.green >= counts.red;
  d["answer"] = answer ? "yes" : "no";
  if (answer == expected) return VerificationResult::ok(d);
  d["diagnosis"] = "opposite";
  return VerificationResult::fail("answer vs. expected mismatch", d);
}

void add_opposite_distractors(PuzzleInstance& inst, bool answer) {
  inst.solution = render(answer);
  for (int v = 0; v < kVariants; ++v) {
    inst.distractors.push_back({render(!answer, v), "opposite_answer", "opposite", {{"variant", v}}});
  }
}

}  // namespace tacit::badge
