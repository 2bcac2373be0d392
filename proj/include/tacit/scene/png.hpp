#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "tacit/scene/raster.hpp"

namespace tacit {

// 8-bit RGBA PNG, fixed zlib settings so equal images give equal bytes.
std::vector<std::uint8_t> encode_png(const RasterImage& image);

// Any PNG color type; output is expanded to RGBA8.
// Throws std::runtime_error on malformed input.
RasterImage decode_png(std::span<const std::uint8_t> bytes);

void write_png(const std::filesystem::path& path, const RasterImage& image);
RasterImage read_png(const std::filesystem::path& path);

}  // namespace tacit
