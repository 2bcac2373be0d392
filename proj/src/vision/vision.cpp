#include "tacit/vision/vision.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "tacit/core/errors.hpp"
#include "tacit/scene/palette.hpp"

namespace tacit::vision {

double ClassSet::min_separation() const {
  double best = 1e300;
  for (std::size_t i = 0; i < classes.size(); ++i) {
    for (std::size_t j = i + 1; j < classes.size(); ++j) {
      best = std::min(best, palette::distance(classes[i].color, classes[j].color));
    }
  }
  return best;
}

int classify_color(Color rgb, const ClassSet& set) {
  int best = kUnknown;
  double best_d = 0;
  for (const auto& c : set.classes) {
    const double d = palette::distance(rgb, c.color);
    if (d > set.tolerance) continue;
    if (best == kUnknown || d < best_d || (d == best_d && c.id < best)) {
      best = c.id;
      best_d = d;
    }
  }
  return best;
}

void to_json(nlohmann::json& j, const GridGeometry& g) {
  j = {{"x0", g.x0}, {"y0", g.y0}, {"cell_w", g.cell_w}, {"cell_h", g.cell_h}, {"rows", g.rows}, {"cols", g.cols}};
}

void from_json(const nlohmann::json& j, GridGeometry& g) {
  g.x0 = j.at("x0");
  g.y0 = j.at("y0");
  g.cell_w = j.at("cell_w");
  g.cell_h = j.at("cell_h");
  g.rows = j.at("rows");
  g.cols = j.at("cols");
}

std::pair<int, int> pixel_span(double u0, double u1, double scale, int limit) {
  int lo = static_cast<int>(std::ceil(u0 * scale - 0.5));
  int hi = static_cast<int>(std::ceil(u1 * scale - 0.5));
  lo = std::clamp(lo, 0, limit);
  hi = std::clamp(hi, 0, limit);
  if (hi <= lo) {
    const int mid = std::clamp(static_cast<int>(std::floor((u0 + u1) / 2 * scale)), 0, limit - 1);
    return {mid, mid + 1};
  }
  return {lo, hi};
}

namespace {

int majority(const std::map<int, long long>& votes) {
  int best = kUnknown;
  long long best_n = 0;
  for (const auto& [id, n] : votes) {
    if (n > best_n) {
      best = id;
      best_n = n;
    }
  }
  return best;
}

}  // namespace

ClassMatrix sample_grid(const RasterImage& image, const GridGeometry& geom, const ClassSet& classes,
                        SampleMode mode) {
  const double scale = image.width / kCanvasUnits;
  ClassMatrix out(static_cast<std::size_t>(geom.rows), std::vector<int>(static_cast<std::size_t>(geom.cols), kUnknown));
  for (int r = 0; r < geom.rows; ++r) {
    for (int c = 0; c < geom.cols; ++c) {
      const double cx = geom.center_x(c), cy = geom.center_y(r);
      int result = kUnknown;
      switch (mode) {
        case SampleMode::center_point: {
          const int px = std::clamp(static_cast<int>(std::floor(cx * scale)), 0, image.width - 1);
          const int py = std::clamp(static_cast<int>(std::floor(cy * scale)), 0, image.height - 1);
          result = classify_color(image.pixel(px, py), classes);
          break;
        }
        case SampleMode::center_patch_majority: {
          const double hw = geom.cell_w * kCenterPatch / 2, hh = geom.cell_h * kCenterPatch / 2;
          const auto [x0, x1] = pixel_span(cx - hw, cx + hw, scale, image.width);
          const auto [y0, y1] = pixel_span(cy - hh, cy + hh, scale, image.height);
          std::map<int, long long> votes;
          for (int py = y0; py < y1; ++py) {
            for (int px = x0; px < x1; ++px) {
              const int id = classify_color(image.pixel(px, py), classes);
              if (id != kUnknown) ++votes[id];
            }
          }
          result = majority(votes);
          break;
        }
        case SampleMode::inverse_distance_vote: {
          const auto [x0, x1] = pixel_span(geom.x0 + c * geom.cell_w, geom.x0 + (c + 1) * geom.cell_w, scale,
                                           image.width);
          const auto [y0, y1] = pixel_span(geom.y0 + r * geom.cell_h, geom.y0 + (r + 1) * geom.cell_h, scale,
                                           image.height);
          std::map<int, double> weight;
          for (int py = y0; py < y1; ++py) {
            for (int px = x0; px < x1; ++px) {
              const int id = classify_color(image.pixel(px, py), classes);
              if (id == kUnknown) continue;
              const auto it = std::find_if(classes.classes.begin(), classes.classes.end(),
                                           [id](const ColorClass& k) { return k.id == id; });
              if (it->background) continue;
              const double d = std::hypot(px + 0.5 - cx * scale, py + 0.5 - cy * scale);
              weight[id] += 1.0 / (1.0 + d);
            }
          }
          double best_w = 0;
          for (const auto& [id, w] : weight) {
            if (w > best_w) {
              best_w = w;
              result = id;
            }
          }
          break;
        }
      }
      out[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] = result;
    }
  }
  return out;
}

namespace {

constexpr int kWindow = 11;
constexpr double kSigma = 1.5;
constexpr double kC1 = (0.01 * 255) * (0.01 * 255);
constexpr double kC2 = (0.03 * 255) * (0.03 * 255);

std::array<double, kWindow> gaussian() {
  std::array<double, kWindow> w{};
  double sum = 0;
  for (int i = 0; i < kWindow; ++i) {
    const double d = i - kWindow / 2;
    w[static_cast<std::size_t>(i)] = std::exp(-(d * d) / (2 * kSigma * kSigma));
    sum += w[static_cast<std::size_t>(i)];
  }
  for (auto& v : w) v /= sum;
  return w;
}

std::vector<double> luma(const RasterImage& img) {
  std::vector<double> out(static_cast<std::size_t>(img.width) * img.height);
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = 0.299 * img.rgba[i * 4] + 0.587 * img.rgba[i * 4 + 1] + 0.114 * img.rgba[i * 4 + 2];
  }
  return out;
}

void check_pair(const RasterImage& a, const RasterImage& b) {
  if (a.width != b.width || a.height != b.height) {
    throw ValidationError("ssim: dimension mismatch " + std::to_string(a.width) + "x" + std::to_string(a.height) +
                          " vs " + std::to_string(b.width) + "x" + std::to_string(b.height));
  }
  if (a.width < kWindow || a.height < kWindow) throw ValidationError("ssim: image smaller than window");
}

inline double ssim_term(double mx, double my, double sxx, double syy, double sxy) {
  const double vx = sxx - mx * mx, vy = syy - my * my, cxy = sxy - mx * my;
  return ((2 * mx * my + kC1) * (2 * cxy + kC2)) / ((mx * mx + my * my + kC1) * (vx + vy + kC2));
}

}  // namespace

double ssim(const RasterImage& a, const RasterImage& b, Exec exec) {
  check_pair(a, b);
  const bool parallel = exec == Exec::parallel;
  const auto w = gaussian();
  const int W = a.width, H = a.height;
  const int ow = W - kWindow + 1, oh = H - kWindow + 1;
  const auto x = luma(a), y = luma(b);

  // Horizontal pass over the five moment maps.
  const std::size_t hsize = static_cast<std::size_t>(ow) * H;
  std::vector<double> hx(hsize), hy(hsize), hxx(hsize), hyy(hsize), hxy(hsize);
#pragma omp parallel if (parallel)
  {
    std::vector<double> xx(W), yy(W), xy(W);
#pragma omp for schedule(static)
    for (int r = 0; r < H; ++r) {
      const double* xr = x.data() + static_cast<std::size_t>(r) * W;
      const double* yr = y.data() + static_cast<std::size_t>(r) * W;
      for (int c = 0; c < W; ++c) {
        xx[c] = xr[c] * xr[c];
        yy[c] = yr[c] * yr[c];
        xy[c] = xr[c] * yr[c];
      }
      const std::size_t base = static_cast<std::size_t>(r) * ow;
      double* ox = hx.data() + base;
      double* oy = hy.data() + base;
      double* oxx = hxx.data() + base;
      double* oyy = hyy.data() + base;
      double* oxy = hxy.data() + base;
      std::fill_n(ox, ow, 0.0);
      std::fill_n(oy, ow, 0.0);
      std::fill_n(oxx, ow, 0.0);
      std::fill_n(oyy, ow, 0.0);
      std::fill_n(oxy, ow, 0.0);
      for (int k = 0; k < kWindow; ++k) {
        const double wk = w[static_cast<std::size_t>(k)];
        for (int c = 0; c < ow; ++c) {
          ox[c] += wk * xr[c + k];
          oy[c] += wk * yr[c + k];
          oxx[c] += wk * xx[c + k];
          oyy[c] += wk * yy[c + k];
          oxy[c] += wk * xy[c + k];
        }
      }
    }
  }

  // Vertical pass row by row, accumulating whole rows so the inner loop
  // runs over contiguous memory.
  double total = 0;
#pragma omp parallel if (parallel)
  {
    std::vector<double> mx(ow), my(ow), sxx(ow), syy(ow), sxy(ow);
#pragma omp for schedule(static) reduction(+ : total)
    for (int r = 0; r < oh; ++r) {
      std::fill(mx.begin(), mx.end(), 0.0);
      std::fill(my.begin(), my.end(), 0.0);
      std::fill(sxx.begin(), sxx.end(), 0.0);
      std::fill(syy.begin(), syy.end(), 0.0);
      std::fill(sxy.begin(), sxy.end(), 0.0);
      for (int k = 0; k < kWindow; ++k) {
        const double wk = w[static_cast<std::size_t>(k)];
        const std::size_t base = static_cast<std::size_t>(r + k) * ow;
        for (int c = 0; c < ow; ++c) {
          mx[c] += wk * hx[base + c];
          my[c] += wk * hy[base + c];
          sxx[c] += wk * hxx[base + c];
          syy[c] += wk * hyy[base + c];
          sxy[c] += wk * hxy[base + c];
        }
      }
      double row_sum = 0;
      for (int c = 0; c < ow; ++c) row_sum += ssim_term(mx[c], my[c], sxx[c], syy[c], sxy[c]);
      total += row_sum;
    }
  }
  return total / (static_cast<double>(ow) * oh);
}

namespace reference {

double ssim(const RasterImage& a, const RasterImage& b) {
  check_pair(a, b);
  const auto w = gaussian();
  const int W = a.width, H = a.height;
  const auto x = luma(a), y = luma(b);
  double total = 0;
  long long count = 0;
  for (int r = 0; r + kWindow <= H; ++r) {
    for (int c = 0; c + kWindow <= W; ++c) {
      double mx = 0, my = 0, sxx = 0, syy = 0, sxy = 0;
      for (int i = 0; i < kWindow; ++i) {
        for (int j = 0; j < kWindow; ++j) {
          const double wk = w[static_cast<std::size_t>(i)] * w[static_cast<std::size_t>(j)];
          const std::size_t p = static_cast<std::size_t>(r + i) * W + (c + j);
          mx += wk * x[p];
          my += wk * y[p];
          sxx += wk * x[p] * x[p];
          syy += wk * y[p] * y[p];
          sxy += wk * x[p] * y[p];
        }
      }
      total += ssim_term(mx, my, sxx, syy, sxy);
      ++count;
    }
  }
  return total / static_cast<double>(count);
}

}  // namespace reference

ClassSet maze_classes() {
  ClassSet set;
  int id = 0;
  set.classes.push_back({id++, palette::path_blue, false});
  set.classes.push_back({id++, palette::background_white, true});
  set.classes.push_back({id++, palette::wall_black, true});
  set.classes.push_back({id++, palette::start_green, false});
  set.classes.push_back({id++, palette::end_red, false});
  for (const auto& c : palette::portal) set.classes.push_back({id++, c, false});
  return set;
}

ClassSet badge_classes() {
  ClassSet set;
  set.classes = {{0, palette::badge_green, false},
                 {1, palette::badge_red, false},
                 {2, palette::background_white, true},
                 {3, palette::wall_black, true}};
  return set;
}

AnswerCounts count_answer_pixels(const RasterImage& image) {
  const ClassSet set = badge_classes();
  AnswerCounts out;
  for (int y = 0; y < image.height; ++y) {
    for (int x = 0; x < image.width; ++x) {
      const int id = classify_color(image.pixel(x, y), set);
      if (id == 0) ++out.green;
      else if (id == 1) ++out.red;
    }
  }
  return out;
}

std::vector<LayerCell> extract_path_cells(const RasterImage& image, const std::vector<GridGeometry>& layers) {
  const ClassSet set = maze_classes();
  const double scale = image.width / kCanvasUnits;
  std::vector<LayerCell> cells;
  for (std::size_t l = 0; l < layers.size(); ++l) {
    const GridGeometry& g = layers[l];
    for (int r = 0; r < g.rows; ++r) {
      for (int c = 0; c < g.cols; ++c) {
        const double cx = g.center_x(c), cy = g.center_y(r);
        const double hw = g.cell_w * kCenterPatch / 2, hh = g.cell_h * kCenterPatch / 2;
        const auto [x0, x1] = pixel_span(cx - hw, cx + hw, scale, image.width);
        const auto [y0, y1] = pixel_span(cy - hh, cy + hh, scale, image.height);
        long long blue = 0, total = 0;
        for (int py = y0; py < y1; ++py) {
          for (int px = x0; px < x1; ++px) {
            ++total;
            if (classify_color(image.pixel(px, py), set) == 0) ++blue;
          }
        }
        if (total > 0 && static_cast<double>(blue) >= kPathCoverage * static_cast<double>(total)) {
          cells.push_back({static_cast<int>(l), r, c});
        }
      }
    }
  }
  return cells;
}

}  // namespace tacit::vision
