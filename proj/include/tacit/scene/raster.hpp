#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "tacit/scene/scene.hpp"

namespace tacit {

inline constexpr std::array<int, 3> kResolutions = {512, 1024, 2048};

bool is_canonical_resolution(int pixels);

/// Row-major RGBA8 pixels. Pipeline output is square and opaque.
struct RasterImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> rgba;

  RasterImage() = default;
  RasterImage(int w, int h, Color fill);

  Color pixel(int x, int y) const {
    const auto i = (static_cast<std::size_t>(y) * width + x) * 4;
    return {rgba[i], rgba[i + 1], rgba[i + 2]};
  }
  void set_pixel(int x, int y, Color c) {
    const auto i = (static_cast<std::size_t>(y) * width + x) * 4;
    rgba[i] = c.r;
    rgba[i + 1] = c.g;
    rgba[i + 2] = c.b;
    rgba[i + 3] = 255;
  }

  bool operator==(const RasterImage&) const = default;
};

enum class Exec { serial, parallel };

/// Rasterizes with 4x4 supersampling per pixel (sample offsets 1/8, 3/8,
/// 5/8, 7/8). Each fill or stroke computes a 16-bit sample coverage mask per
/// pixel and is composited as old*(16-n)/16 + color*n/16 with integer
/// rounding, n = covered samples. Strokes use round caps and joins.
///
/// Throws std::invalid_argument unless `resolution` is 512, 1024 or 2048.
RasterImage rasterize(const Scene& scene, int resolution, Exec exec = Exec::parallel);

// Same pipeline at an arbitrary square size; used by tests and thumbnails.
RasterImage rasterize_unchecked(const Scene& scene, int pixels, Exec exec = Exec::parallel);

namespace reference {

// Straightforward per-sample rasterizer without fast paths or threading.
// Must agree byte-for-byte with tacit::rasterize.
RasterImage rasterize(const Scene& scene, int pixels);

}  // namespace reference

}  // namespace tacit
