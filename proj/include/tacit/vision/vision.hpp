#pragma once

#include <compare>
#include <vector>

#include <nlohmann/json.hpp>

#include "tacit/scene/raster.hpp"

namespace tacit::vision {

inline constexpr int kUnknown = -1;
inline constexpr double kDefaultTolerance = 60.0;

struct ColorClass {
  int id = 0;
  Color color;
  // Background classes are skipped by inverse-distance voting.
  bool background = false;
};

struct ClassSet {
  std::vector<ColorClass> classes;
  double tolerance = kDefaultTolerance;

  // Smallest pairwise RGB distance between classes.
  double min_separation() const;
};

// Nearest class within tolerance, else kUnknown. Ties go to the lowest id.
int classify_color(Color rgb, const ClassSet& classes);

/// Axis-aligned cell grid in scene units (kCanvasUnits square canvas);
/// scaled to pixels by image.width / kCanvasUnits at sampling time.
struct GridGeometry {
  double x0 = 0, y0 = 0;
  double cell_w = 0, cell_h = 0;
  int rows = 0, cols = 0;

  double center_x(int col) const { return x0 + (col + 0.5) * cell_w; }
  double center_y(int row) const { return y0 + (row + 0.5) * cell_h; }

  bool operator==(const GridGeometry&) const = default;
};

void to_json(nlohmann::json& j, const GridGeometry& g);
void from_json(const nlohmann::json& j, GridGeometry& g);

enum class SampleMode { center_point, center_patch_majority, inverse_distance_vote };

using ClassMatrix = std::vector<std::vector<int>>;

// Fraction of the cell (per side) covered by the center patch.
inline constexpr double kCenterPatch = 0.5;

ClassMatrix sample_grid(const RasterImage& image, const GridGeometry& geom, const ClassSet& classes,
                        SampleMode mode);

/// Mean SSIM over luma (ITU-R 601), 11x11 Gaussian window (sigma 1.5),
/// K1 = 0.01, K2 = 0.03, L = 255, valid window positions only.
/// Throws ValidationError on size mismatch or images smaller than the window.
double ssim(const RasterImage& a, const RasterImage& b, Exec exec = Exec::parallel);

namespace reference {
// Direct 2-D windowed sums, no separable filtering or threading.
double ssim(const RasterImage& a, const RasterImage& b);
}  // namespace reference

struct AnswerCounts {
  long long green = 0;
  long long red = 0;
};

AnswerCounts count_answer_pixels(const RasterImage& image);

struct LayerCell {
  int layer = 0, row = 0, col = 0;
  auto operator<=>(const LayerCell&) const = default;
};

// Minimum fraction of the center patch that must read path-blue.
inline constexpr double kPathCoverage = 0.15;

// Cells (sorted) whose center patch is at least kPathCoverage path-blue.
// `layers[i]` is the grid of maze layer i.
std::vector<LayerCell> extract_path_cells(const RasterImage& image, const std::vector<GridGeometry>& layers);

// Class sets shared by several verifiers.
ClassSet maze_classes();
ClassSet badge_classes();

// Pixel index range [lo, hi) whose centers fall in [u0, u1) scene units.
std::pair<int, int> pixel_span(double u0, double u1, double scale, int limit);

}  // namespace tacit::vision
