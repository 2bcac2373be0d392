#include "tacit/scene/raster.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

#include "tacit/scene/font.hpp"
#include "tacit/scene/palette.hpp"

namespace tacit {

namespace {

constexpr double kOffset[4] = {0.125, 0.375, 0.625, 0.875};

struct Segment {
  Point a, b;
};

enum class Kind { rect, disc, annulus, capsules, polyfill };

struct Layer {
  Kind kind = Kind::rect;
  Color color;
  double x0 = 0, y0 = 0, x1 = 0, y1 = 0;  // rect
  double cx = 0, cy = 0, r_in = 0, r_out = 0;  // disc / annulus
  std::vector<Segment> segs;  // capsules
  double half_width = 0;
  std::vector<Point> poly;  // polyfill
  int bx0 = 0, by0 = 0, bx1 = 0, by1 = 0;  // pixel bbox, half-open, clipped
};

struct Crossing {
  double x;
  int dir;
  bool operator<(const Crossing& o) const { return x < o.x || (x == o.x && dir < o.dir); }
};

// Edges of `poly` crossing the horizontal line at y; same formula for every
// caller so the inside test is bit-identical between implementations.
void row_crossings(const std::vector<Point>& poly, double y, std::vector<Crossing>& out) {
  out.clear();
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point& a = poly[i];
    const Point& b = poly[(i + 1) % n];
    int dir = 0;
    if (a.y <= y && y < b.y) dir = 1;
    else if (b.y <= y && y < a.y) dir = -1;
    if (dir == 0) continue;
    const double x = a.x + (y - a.y) * (b.x - a.x) / (b.y - a.y);
    out.push_back({x, dir});
  }
}

inline double seg_dist2(const Segment& s, double x, double y) {
  const double vx = s.b.x - s.a.x, vy = s.b.y - s.a.y;
  const double wx = x - s.a.x, wy = y - s.a.y;
  const double len2 = vx * vx + vy * vy;
  double t = 0.0;
  if (len2 > 0.0) t = std::clamp((wx * vx + wy * vy) / len2, 0.0, 1.0);
  const double dx = wx - t * vx, dy = wy - t * vy;
  return dx * dx + dy * dy;
}

inline bool in_rect(const Layer& l, double x, double y) {
  return l.x0 <= x && x < l.x1 && l.y0 <= y && y < l.y1;
}

inline bool in_disc(const Layer& l, double x, double y) {
  const double dx = x - l.cx, dy = y - l.cy;
  return dx * dx + dy * dy <= l.r_out * l.r_out;
}

inline bool in_annulus(const Layer& l, double x, double y) {
  const double dx = x - l.cx, dy = y - l.cy;
  const double d2 = dx * dx + dy * dy;
  return l.r_in * l.r_in <= d2 && d2 <= l.r_out * l.r_out;
}

inline bool in_capsule(const Segment& s, double hw, double x, double y) {
  return seg_dist2(s, x, y) <= hw * hw;
}

inline void blend(std::uint8_t* p, Color c, int n) {
  if (n == 0) return;
  if (n == 16) {
    p[0] = c.r;
    p[1] = c.g;
    p[2] = c.b;
    return;
  }
  const int keep = 16 - n;
  p[0] = static_cast<std::uint8_t>((p[0] * keep + c.r * n + 8) / 16);
  p[1] = static_cast<std::uint8_t>((p[1] * keep + c.g * n + 8) / 16);
  p[2] = static_cast<std::uint8_t>((p[2] * keep + c.b * n + 8) / 16);
}

void set_bbox(Layer& l, double minx, double miny, double maxx, double maxy, int w, int h) {
  l.bx0 = std::clamp(static_cast<int>(std::floor(minx)) - 1, 0, w);
  l.by0 = std::clamp(static_cast<int>(std::floor(miny)) - 1, 0, h);
  l.bx1 = std::clamp(static_cast<int>(std::ceil(maxx)) + 1, 0, w);
  l.by1 = std::clamp(static_cast<int>(std::ceil(maxy)) + 1, 0, h);
}

Layer capsule_layer(std::vector<Segment> segs, double half_width, Color color, int w, int h) {
  Layer l;
  l.kind = Kind::capsules;
  l.color = color;
  l.half_width = half_width;
  double minx = 1e300, miny = 1e300, maxx = -1e300, maxy = -1e300;
  for (const auto& s : segs) {
    minx = std::min({minx, s.a.x, s.b.x});
    maxx = std::max({maxx, s.a.x, s.b.x});
    miny = std::min({miny, s.a.y, s.b.y});
    maxy = std::max({maxy, s.a.y, s.b.y});
  }
  l.segs = std::move(segs);
  if (l.segs.empty()) return l;
  set_bbox(l, minx - half_width, miny - half_width, maxx + half_width, maxy + half_width, w, h);
  return l;
}

std::vector<Segment> chain(const std::vector<Point>& pts, bool closed) {
  std::vector<Segment> out;
  if (pts.size() == 1) out.push_back({pts[0], pts[0]});
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) out.push_back({pts[i], pts[i + 1]});
  if (closed && pts.size() > 2) out.push_back({pts.back(), pts.front()});
  return out;
}

std::vector<Layer> build_layers(const Scene& scene, int w, int h) {
  const double sx = w / scene.width();
  const double sy = h / scene.height();
  const double sw = std::sqrt(sx * sy);
  auto tp = [&](Point p) { return Point{p.x * sx, p.y * sy}; };
  auto tpoints = [&](const std::vector<Point>& pts) {
    std::vector<Point> out;
    out.reserve(pts.size());
    for (const auto& p : pts) out.push_back(tp(p));
    return out;
  };

  std::vector<Layer> layers;
  for (const Item& item : scene.items()) {
    const Paint& paint = item.paint;
    const double hw = paint.stroke_width * sw / 2.0;
    std::visit(
        [&](const auto& s) {
          using T = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<T, Rect>) {
            const Point a = tp({s.x, s.y});
            const Point b = tp({s.x + s.w, s.y + s.h});
            if (paint.fill) {
              Layer l;
              l.kind = Kind::rect;
              l.color = *paint.fill;
              l.x0 = std::min(a.x, b.x);
              l.x1 = std::max(a.x, b.x);
              l.y0 = std::min(a.y, b.y);
              l.y1 = std::max(a.y, b.y);
              set_bbox(l, l.x0, l.y0, l.x1, l.y1, w, h);
              layers.push_back(std::move(l));
            }
            if (paint.stroke && hw > 0) {
              std::vector<Point> corners = {a, {b.x, a.y}, b, {a.x, b.y}};
              layers.push_back(capsule_layer(chain(corners, true), hw, *paint.stroke, w, h));
            }
          } else if constexpr (std::is_same_v<T, Circle>) {
            const Point c = tp({s.cx, s.cy});
            const double r = s.r * sw;
            if (paint.fill) {
              Layer l;
              l.kind = Kind::disc;
              l.color = *paint.fill;
              l.cx = c.x;
              l.cy = c.y;
              l.r_out = r;
              set_bbox(l, c.x - r, c.y - r, c.x + r, c.y + r, w, h);
              layers.push_back(std::move(l));
            }
            if (paint.stroke && hw > 0) {
              Layer l;
              l.kind = Kind::annulus;
              l.color = *paint.stroke;
              l.cx = c.x;
              l.cy = c.y;
              l.r_in = std::max(0.0, r - hw);
              l.r_out = r + hw;
              set_bbox(l, c.x - l.r_out, c.y - l.r_out, c.x + l.r_out, c.y + l.r_out, w, h);
              layers.push_back(std::move(l));
            }
          } else if constexpr (std::is_same_v<T, Line>) {
            if (paint.stroke && hw > 0) {
              layers.push_back(capsule_layer({{tp(s.a), tp(s.b)}}, hw, *paint.stroke, w, h));
            }
          } else if constexpr (std::is_same_v<T, Polyline>) {
            if (paint.stroke && hw > 0 && !s.points.empty()) {
              layers.push_back(capsule_layer(chain(tpoints(s.points), false), hw, *paint.stroke, w, h));
            }
          } else if constexpr (std::is_same_v<T, Polygon>) {
            const auto pts = tpoints(s.points);
            if (paint.fill && pts.size() >= 3) {
              Layer l;
              l.kind = Kind::polyfill;
              l.color = *paint.fill;
              double minx = 1e300, miny = 1e300, maxx = -1e300, maxy = -1e300;
              for (const auto& p : pts) {
                minx = std::min(minx, p.x);
                maxx = std::max(maxx, p.x);
                miny = std::min(miny, p.y);
                maxy = std::max(maxy, p.y);
              }
              l.poly = pts;
              set_bbox(l, minx, miny, maxx, maxy, w, h);
              layers.push_back(std::move(l));
            }
            if (paint.stroke && hw > 0 && !pts.empty()) {
              layers.push_back(capsule_layer(chain(pts, true), hw, *paint.stroke, w, h));
            }
          } else if constexpr (std::is_same_v<T, Text>) {
            if (paint.fill && !s.text.empty()) {
              std::vector<Segment> segs;
              for (const auto& stroke : font::layout(s)) {
                auto part = chain(tpoints(stroke), false);
                segs.insert(segs.end(), part.begin(), part.end());
              }
              const double thw = font::stroke_width(s.size) * sw / 2.0;
              layers.push_back(capsule_layer(std::move(segs), thw, *paint.fill, w, h));
            }
          }
        },
        item.shape);
  }
  return layers;
}

void paint_rect(RasterImage& img, const Layer& l, bool parallel) {
  const int nx = l.bx1 - l.bx0;
  std::vector<std::uint8_t> xbits(static_cast<std::size_t>(std::max(nx, 0)));
  for (int px = l.bx0; px < l.bx1; ++px) {
    std::uint8_t bits = 0;
    for (int i = 0; i < 4; ++i) {
      const double x = px + kOffset[i];
      if (l.x0 <= x && x < l.x1) bits |= std::uint8_t(1u << i);
    }
    xbits[px - l.bx0] = bits;
  }
#pragma omp parallel for schedule(static) if (parallel)
  for (int py = l.by0; py < l.by1; ++py) {
    int ycount = 0;
    for (int j = 0; j < 4; ++j) {
      const double y = py + kOffset[j];
      if (l.y0 <= y && y < l.y1) ++ycount;
    }
    if (ycount == 0) continue;
    std::uint8_t* row = img.rgba.data() + static_cast<std::size_t>(py) * img.width * 4;
    for (int px = l.bx0; px < l.bx1; ++px) {
      const int n = std::popcount(static_cast<unsigned>(xbits[px - l.bx0])) * ycount;
      blend(row + px * 4, l.color, n);
    }
  }
}

void paint_round(RasterImage& img, const Layer& l, bool parallel) {
  const bool ring = l.kind == Kind::annulus;
  const double margin = 1e-6;
#pragma omp parallel for schedule(static) if (parallel)
  for (int py = l.by0; py < l.by1; ++py) {
    std::uint8_t* row = img.rgba.data() + static_cast<std::size_t>(py) * img.width * 4;
    const double ylo = py + kOffset[0], yhi = py + kOffset[3];
    for (int px = l.bx0; px < l.bx1; ++px) {
      const double xlo = px + kOffset[0], xhi = px + kOffset[3];
      // Nearest and farthest distance from the center to the sample box.
      const double nx = std::clamp(l.cx, xlo, xhi) - l.cx;
      const double ny = std::clamp(l.cy, ylo, yhi) - l.cy;
      const double fx = std::max(std::abs(xlo - l.cx), std::abs(xhi - l.cx));
      const double fy = std::max(std::abs(ylo - l.cy), std::abs(yhi - l.cy));
      const double near2 = nx * nx + ny * ny;
      const double far2 = fx * fx + fy * fy;
      const double ro2 = l.r_out * l.r_out;
      if (near2 > ro2 * (1 + margin) + margin) continue;
      if (ring && far2 < l.r_in * l.r_in * (1 - margin) - margin) continue;
      if (!ring && far2 < ro2 * (1 - margin) - margin) {
        blend(row + px * 4, l.color, 16);
        continue;
      }
      int n = 0;
      for (int j = 0; j < 4; ++j) {
        for (int i = 0; i < 4; ++i) {
          const double x = px + kOffset[i], y = py + kOffset[j];
          n += ring ? in_annulus(l, x, y) : in_disc(l, x, y);
        }
      }
      blend(row + px * 4, l.color, n);
    }
  }
}

void paint_capsules(RasterImage& img, const Layer& l, bool parallel) {
  const int bw = l.bx1 - l.bx0, bh = l.by1 - l.by0;
  if (bw <= 0 || bh <= 0) return;
  std::vector<std::uint16_t> mask(static_cast<std::size_t>(bw) * bh, 0);
  for (const auto& s : l.segs) {
    const int x0 = std::clamp(static_cast<int>(std::floor(std::min(s.a.x, s.b.x) - l.half_width)) - 1, l.bx0, l.bx1);
    const int x1 = std::clamp(static_cast<int>(std::ceil(std::max(s.a.x, s.b.x) + l.half_width)) + 1, l.bx0, l.bx1);
    const int y0 = std::clamp(static_cast<int>(std::floor(std::min(s.a.y, s.b.y) - l.half_width)) - 1, l.by0, l.by1);
    const int y1 = std::clamp(static_cast<int>(std::ceil(std::max(s.a.y, s.b.y) + l.half_width)) + 1, l.by0, l.by1);
#pragma omp parallel for schedule(static) if (parallel)
    for (int py = y0; py < y1; ++py) {
      std::uint16_t* mrow = mask.data() + static_cast<std::size_t>(py - l.by0) * bw;
      for (int px = x0; px < x1; ++px) {
        std::uint16_t m = mrow[px - l.bx0];
        if (m == 0xFFFF) continue;
        for (int j = 0; j < 4; ++j) {
          for (int i = 0; i < 4; ++i) {
            const unsigned bit = 1u << (j * 4 + i);
            if (m & bit) continue;
            if (in_capsule(s, l.half_width, px + kOffset[i], py + kOffset[j])) m |= std::uint16_t(bit);
          }
        }
        mrow[px - l.bx0] = m;
      }
    }
  }
#pragma omp parallel for schedule(static) if (parallel)
  for (int py = l.by0; py < l.by1; ++py) {
    std::uint8_t* row = img.rgba.data() + static_cast<std::size_t>(py) * img.width * 4;
    const std::uint16_t* mrow = mask.data() + static_cast<std::size_t>(py - l.by0) * bw;
    for (int px = l.bx0; px < l.bx1; ++px) {
      blend(row + px * 4, l.color, std::popcount(static_cast<unsigned>(mrow[px - l.bx0])));
    }
  }
}

void paint_polyfill(RasterImage& img, const Layer& l, bool parallel) {
#pragma omp parallel for schedule(static) if (parallel)
  for (int py = l.by0; py < l.by1; ++py) {
    std::uint8_t* row = img.rgba.data() + static_cast<std::size_t>(py) * img.width * 4;
    std::vector<Crossing> xs;
    std::vector<double> xpos[4];
    std::vector<int> suffix[4];
    for (int j = 0; j < 4; ++j) {
      row_crossings(l.poly, py + kOffset[j], xs);
      std::sort(xs.begin(), xs.end());
      xpos[j].resize(xs.size());
      suffix[j].assign(xs.size() + 1, 0);
      for (std::size_t k = 0; k < xs.size(); ++k) xpos[j][k] = xs[k].x;
      for (std::size_t k = xs.size(); k-- > 0;) suffix[j][k] = suffix[j][k + 1] + xs[k].dir;
    }
    for (int px = l.bx0; px < l.bx1; ++px) {
      int n = 0;
      for (int j = 0; j < 4; ++j) {
        if (xpos[j].empty()) continue;
        for (int i = 0; i < 4; ++i) {
          const double x = px + kOffset[i];
          const auto k = std::upper_bound(xpos[j].begin(), xpos[j].end(), x) - xpos[j].begin();
          n += suffix[j][static_cast<std::size_t>(k)] != 0;
        }
      }
      blend(row + px * 4, l.color, n);
    }
  }
}

RasterImage render(const Scene& scene, int pixels, bool parallel) {
  RasterImage img(pixels, pixels, palette::background_white);
  for (const Layer& l : build_layers(scene, pixels, pixels)) {
    switch (l.kind) {
      case Kind::rect: paint_rect(img, l, parallel); break;
      case Kind::disc:
      case Kind::annulus: paint_round(img, l, parallel); break;
      case Kind::capsules: paint_capsules(img, l, parallel); break;
      case Kind::polyfill: paint_polyfill(img, l, parallel); break;
    }
  }
  return img;
}

}  // namespace

bool is_canonical_resolution(int pixels) {
  return std::find(kResolutions.begin(), kResolutions.end(), pixels) != kResolutions.end();
}

RasterImage::RasterImage(int w, int h, Color fill) : width(w), height(h) {
  if (w < 0 || h < 0) throw std::invalid_argument("negative image size");
  rgba.resize(static_cast<std::size_t>(w) * h * 4);
  for (std::size_t i = 0; i < rgba.size(); i += 4) {
    rgba[i] = fill.r;
    rgba[i + 1] = fill.g;
    rgba[i + 2] = fill.b;
    rgba[i + 3] = 255;
  }
}

RasterImage rasterize(const Scene& scene, int resolution, Exec exec) {
  if (!is_canonical_resolution(resolution)) {
    throw std::invalid_argument("resolution must be 512, 1024 or 2048, got " + std::to_string(resolution));
  }
  return render(scene, resolution, exec == Exec::parallel);
}

RasterImage rasterize_unchecked(const Scene& scene, int pixels, Exec exec) {
  if (pixels <= 0) throw std::invalid_argument("image size must be positive");
  return render(scene, pixels, exec == Exec::parallel);
}

namespace reference {

RasterImage rasterize(const Scene& scene, int pixels) {
  RasterImage img(pixels, pixels, palette::background_white);
  std::vector<Crossing> xs;
  for (const Layer& l : build_layers(scene, pixels, pixels)) {
    for (int py = l.by0; py < l.by1; ++py) {
      for (int px = l.bx0; px < l.bx1; ++px) {
        int n = 0;
        for (int j = 0; j < 4; ++j) {
          const double y = py + kOffset[j];
          if (l.kind == Kind::polyfill) row_crossings(l.poly, y, xs);
          for (int i = 0; i < 4; ++i) {
            const double x = px + kOffset[i];
            bool inside = false;
            switch (l.kind) {
              case Kind::rect: inside = in_rect(l, x, y); break;
              case Kind::disc: inside = in_disc(l, x, y); break;
              case Kind::annulus: inside = in_annulus(l, x, y); break;
              case Kind::capsules:
                for (const auto& s : l.segs) {
                  if (in_capsule(s, l.half_width, x, y)) {
                    inside = true;
                    break;
                  }
                }
                break;
              case Kind::polyfill: {
                int winding = 0;
                for (const auto& c : xs) {
                  if (c.x > x) winding += c.dir;
                }
                inside = winding != 0;
                break;
              }
            }
            n += inside;
          }
        }
        blend(img.rgba.data() + (static_cast<std::size_t>(py) * pixels + px) * 4, l.color, n);
      }
    }
  }
  return img;
}

}  // namespace reference

}  // namespace tacit
