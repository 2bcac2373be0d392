#include <doctest.h>

#include <cmath>
#include <numbers>

#include "tacit/core/errors.hpp"
#include "tacit/core/io.hpp"
#include "tacit/core/registry.hpp"
#include "tacit/scene/palette.hpp"
#include "tacit/scene/png.hpp"
#include "tacit/scene/raster.hpp"
#include "tacit/scene/svg.hpp"

using namespace tacit;

namespace {

Scene sampler() {
  Scene s;
  s.rect(100, 100, 300, 200, palette::filled_navy, palette::wall_black, 6);
  s.circle(650, 300, 180, palette::node[2], palette::wall_black, 4);
  s.line({50, 900}, {950, 600}, palette::mark_red, 12);
  s.polyline({{100, 500}, {300, 700}, {500, 520}, {700, 760}}, palette::path_blue, 9);
  s.polygon({{600, 600}, {900, 650}, {760, 940}}, palette::symbol[6], palette::wall_black, 3);
  s.text(300, 850, 60, "AB12=", palette::wall_black);
  return s;
}

long long non_white(const RasterImage& img) {
  long long n = 0;
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) n += img.pixel(x, y) != palette::background_white;
  }
  return n;
}

}  // namespace

TEST_CASE("fast rasterizer matches the per-sample reference byte for byte") {
  const Scene s = sampler();
  for (int px : {64, 173, 512}) {
    CAPTURE(px);
    CHECK(rasterize_unchecked(s, px, Exec::parallel) == reference::rasterize(s, px));
    CHECK(rasterize_unchecked(s, px, Exec::serial) == rasterize_unchecked(s, px, Exec::parallel));
  }
  for (int id : {1, 5, 8, 10}) {
    const auto inst = generate(id, Difficulty::medium, 77);
    CHECK(rasterize_unchecked(inst.puzzle, 256) == reference::rasterize(inst.puzzle, 256));
  }
}

TEST_CASE("only canonical resolutions are accepted") {
  CHECK_THROWS_AS(rasterize(sampler(), 768), std::invalid_argument);
  CHECK_NOTHROW(rasterize(Scene{}, 512));
  CHECK(is_canonical_resolution(2048));
  CHECK_FALSE(is_canonical_resolution(100));
}

TEST_CASE("pixel-aligned rectangle fills exactly its pixels") {
  Scene s;
  s.rect(250, 250, 500, 250, palette::wall_black);  // pixels [32,96) x [32,64) at 128 px
  const RasterImage img = rasterize_unchecked(s, 128);
  CHECK(non_white(img) == 64 * 32);
  CHECK(img.pixel(32, 32) == palette::wall_black);
  CHECK(img.pixel(95, 63) == palette::wall_black);
  CHECK(img.pixel(31, 32) == palette::background_white);
  CHECK(img.pixel(96, 63) == palette::background_white);
}

TEST_CASE("disc coverage approximates the analytic area") {
  Scene s;
  s.circle(500, 500, 300, palette::wall_black);
  const RasterImage img = rasterize_unchecked(s, 400);
  // Darkness-weighted coverage equals covered area in pixels.
  double covered = 0;
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) covered += (255.0 - img.pixel(x, y).r) / 255.0;
  }
  const double r_px = 300 * 0.4;
  CHECK(covered == doctest::Approx(std::numbers::pi * r_px * r_px).epsilon(0.002));
}

TEST_CASE("PNG round trip and byte determinism") {
  const RasterImage img = rasterize_unchecked(sampler(), 200);
  const auto bytes = encode_png(img);
  CHECK(decode_png(bytes) == img);
  CHECK(encode_png(img) == bytes);
  std::vector<std::uint8_t> junk = {1, 2, 3, 4, 5, 6, 7, 8, 9};
  CHECK_THROWS_AS(decode_png(junk), ValidationError);
  std::vector<std::uint8_t> truncated(bytes.begin(), bytes.begin() + bytes.size() / 2);
  CHECK_THROWS(decode_png(truncated));
}

TEST_CASE("SVG round trip preserves the display list") {
  const Scene s = sampler();
  CHECK(parse_svg(emit_svg(s)) == s);
  for (int id = 1; id <= 10; ++id) {
    const auto inst = generate(id, Difficulty::easy, 11);
    CHECK(parse_svg(emit_svg(inst.solution)) == inst.solution);
  }
  CHECK_THROWS_AS(parse_svg("<svg><ellipse/></svg>"), ValidationError);
}

TEST_CASE("palette data file mirrors the compiled palette") {
  const auto doc = read_json(std::filesystem::path(TACIT_SOURCE_DIR) / "data/palette.json");
  const auto named = palette::named_colors();
  REQUIRE(doc.at("colors").size() == named.size());
  for (std::size_t i = 0; i < named.size(); ++i) {
    const auto& c = doc.at("colors")[i];
    CAPTURE(named[i].first);
    CHECK(c.at("name") == named[i].first);
    CHECK(c.at("rgb")[0] == named[i].second.r);
    CHECK(c.at("rgb")[1] == named[i].second.g);
    CHECK(c.at("rgb")[2] == named[i].second.b);
  }
}

TEST_CASE("classified colors sit on the {0,128,255} lattice") {
  for (const auto& [name, c] : palette::named_colors()) {
    if (name.starts_with("iso-")) continue;
    CAPTURE(name);
    for (int v : {c.r, c.g, c.b}) CHECK((v == 0 || v == 128 || v == 255));
  }
}
