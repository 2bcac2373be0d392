#include <doctest.h>

#include <cmath>

#include "tacit/core/errors.hpp"
#include "tacit/core/rng.hpp"
#include "tacit/scene/palette.hpp"
#include "tacit/vision/vision.hpp"

using namespace tacit;
using namespace tacit::vision;

namespace {

RasterImage noise(int w, int h, std::uint64_t seed) {
  Rng rng(seed);
  RasterImage img(w, h, palette::background_white);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      img.set_pixel(x, y, {static_cast<std::uint8_t>(rng.uniform_int(0, 255)),
                           static_cast<std::uint8_t>(rng.uniform_int(0, 255)),
                           static_cast<std::uint8_t>(rng.uniform_int(0, 255))});
    }
  }
  return img;
}

// Textbook SSIM: 2-D Gaussian weights, centered second moments.
double ssim_oracle(const RasterImage& a, const RasterImage& b) {
  const int k = 11;
  const double sigma = 1.5, c1 = std::pow(0.01 * 255, 2), c2 = std::pow(0.03 * 255, 2);
  double wsum = 0;
  std::vector<double> w(k * k);
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) {
      const double di = i - 5, dj = j - 5;
      w[i * k + j] = std::exp(-(di * di + dj * dj) / (2 * sigma * sigma));
      wsum += w[i * k + j];
    }
  }
  auto Y = [](const RasterImage& m, int x, int y) {
    const Color c = m.pixel(x, y);
    return 0.299 * c.r + 0.587 * c.g + 0.114 * c.b;
  };
  double total = 0;
  int count = 0;
  for (int r = 0; r + k <= a.height; ++r) {
    for (int c = 0; c + k <= a.width; ++c) {
      double mx = 0, my = 0;
      for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) {
          mx += w[i * k + j] / wsum * Y(a, c + j, r + i);
          my += w[i * k + j] / wsum * Y(b, c + j, r + i);
        }
      double vx = 0, vy = 0, cov = 0;
      for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) {
          const double dx = Y(a, c + j, r + i) - mx, dy = Y(b, c + j, r + i) - my, g = w[i * k + j] / wsum;
          vx += g * dx * dx;
          vy += g * dy * dy;
          cov += g * dx * dy;
        }
      total += ((2 * mx * my + c1) * (2 * cov + c2)) / ((mx * mx + my * my + c1) * (vx + vy + c2));
      ++count;
    }
  }
  return total / count;
}

}  // namespace

TEST_CASE("SSIM matches a textbook oracle") {
  const RasterImage a = noise(40, 33, 1), b = noise(40, 33, 2);
  RasterImage c = a;
  for (int x = 0; x < 40; ++x) c.set_pixel(x, 10, palette::wall_black);
  CHECK(ssim(a, b) == doctest::Approx(ssim_oracle(a, b)).epsilon(1e-9));
  CHECK(ssim(a, c) == doctest::Approx(ssim_oracle(a, c)).epsilon(1e-9));
  CHECK(ssim(a, c, Exec::serial) == doctest::Approx(ssim(a, c, Exec::parallel)).epsilon(1e-12));
  CHECK(vision::reference::ssim(a, c) == doctest::Approx(ssim_oracle(a, c)).epsilon(1e-9));
}

TEST_CASE("SSIM identities") {
  const RasterImage a = noise(64, 64, 3), b = noise(64, 64, 4);
  CHECK(std::abs(ssim(a, a) - 1.0) < 1e-9);
  CHECK(ssim(a, b) == doctest::Approx(ssim(b, a)).epsilon(1e-12));
  CHECK(ssim(a, b) < 0.2);
  // Flat images: only the luminance term is left.
  const RasterImage g1(32, 32, {100, 100, 100}), g2(32, 32, {150, 150, 150});
  const double c1 = std::pow(0.01 * 255, 2);
  CHECK(ssim(g1, g2) == doctest::Approx((2 * 100.0 * 150 + c1) / (100.0 * 100 + 150.0 * 150 + c1)).epsilon(1e-9));
  CHECK_THROWS_AS(ssim(a, noise(63, 64, 5)), ValidationError);
  CHECK_THROWS_AS(ssim(noise(8, 8, 1), noise(8, 8, 2)), ValidationError);
}

TEST_CASE("classify_color: nearest within tolerance, ties to lowest id") {
  ClassSet set;
  set.classes = {{0, palette::wall_black, true}, {1, palette::path_blue, false}, {2, palette::end_red, false}};
  CHECK(classify_color({10, 5, 0}, set) == 0);
  CHECK(classify_color({20, 20, 230}, set) == 1);
  CHECK(classify_color({128, 128, 128}, set) == kUnknown);
  ClassSet twins;
  twins.classes = {{3, {0, 0, 0}, false}, {1, {0, 0, 0}, false}};
  CHECK(classify_color({0, 0, 0}, twins) == 1);
  CHECK(set.min_separation() == doctest::Approx(255.0));
}

TEST_CASE("sample_grid modes read a synthetic checkerboard") {
  const GridGeometry g{100, 100, 200, 200, 4, 4};
  RasterImage img(256, 256, palette::background_white);
  ClassSet set;
  set.classes = {{0, palette::filled_navy, false}, {1, palette::background_white, false}};
  const double scale = 256 / kCanvasUnits;
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) {
      if ((r + c) % 2) continue;
      const auto [x0, x1] = pixel_span(g.x0 + c * g.cell_w, g.x0 + (c + 1) * g.cell_w, scale, 256);
      const auto [y0, y1] = pixel_span(g.y0 + r * g.cell_h, g.y0 + (r + 1) * g.cell_h, scale, 256);
      for (int y = y0; y < y1; ++y)
        for (int x = x0; x < x1; ++x) img.set_pixel(x, y, palette::filled_navy);
    }
  }
  // Speckle one cell's center pixel: the patch majority ignores it.
  img.set_pixel(static_cast<int>(g.center_x(1) * scale), static_cast<int>(g.center_y(0) * scale), palette::filled_navy);
  const auto point = sample_grid(img, g, set, SampleMode::center_point);
  const auto patch = sample_grid(img, g, set, SampleMode::center_patch_majority);
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) CHECK(patch[r][c] == ((r + c) % 2 ? 1 : 0));
  }
  CHECK(point[0][1] == 0);
  CHECK(patch[0][1] == 1);
}

TEST_CASE("pixel_span covers pixel centers inside the interval") {
  CHECK(pixel_span(0, 1000, 0.512, 512) == std::pair{0, 512});
  CHECK(pixel_span(100, 300, 0.512, 512) == std::pair{51, 154});
  // Sub-pixel interval still yields one pixel.
  const auto [lo, hi] = pixel_span(500.1, 500.2, 0.512, 512);
  CHECK(hi - lo == 1);
}

TEST_CASE("count_answer_pixels counts badge colors only") {
  RasterImage img(40, 40, palette::background_white);
  for (int i = 0; i < 30; ++i) img.set_pixel(i, 0, palette::badge_green);
  for (int i = 0; i < 12; ++i) img.set_pixel(i, 1, palette::badge_red);
  img.set_pixel(0, 2, palette::path_blue);
  const auto n = count_answer_pixels(img);
  CHECK(n.green == 30);
  CHECK(n.red == 12);
}
