#include "tacit/tasks/knot.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include "tacit/core/errors.hpp"
#include "tacit/scene/palette.hpp"
#include "tacit/tasks/badge.hpp"
#include "tacit/tasks/generators.hpp"

namespace tacit::knot {

namespace {

constexpr int kSamples = 12000;
constexpr double kCurl = 38;               // curl radius, scene units
constexpr double kCurlSpan = 2.5 * kCurl;  // base arc replaced by one curl
constexpr double kStroke = 7;
constexpr double kMinCrossingGap = 50;
constexpr double kMinCrossingSine = 0.4;
constexpr double kMaxCurlTurn = 0.8;  // radians of base turn across a curl

struct P3 {
  double x, y, z;
};

P3 base_point(Base b, double t) {
  using std::cos, std::sin;
  switch (b) {
    case Base::circle: return {cos(t), sin(t), 0};
    case Base::figure_eight: return {(2 + cos(2 * t)) * cos(3 * t), (2 + cos(2 * t)) * sin(3 * t), sin(4 * t)};
    default: {
      // Torus knot T(2, q).
      const double q = base_crossings(b);
      const double r = 2 + cos(q * t);
      return {r * cos(2 * t), r * sin(2 * t), -sin(q * t)};
    }
  }
}

double cross(Point a, Point b) { return a.x * b.y - a.y * b.x; }

class KnotTask final : public TaskSpec {
 public:
  explicit KnotTask(KnotSpec spec) : spec_(std::move(spec)) {}

  VerificationResult verify(const RasterImage& candidate, const VerifyOptions&) const override {
    return badge::verify(candidate, spec_.unknot());
  }

  nlohmann::json structure() const override {
    nlohmann::json kinks = nlohmann::json::array();
    for (const Kink& k : spec_.kinks) kinks.push_back({{"s", k.s}, {"sign", k.sign}, {"side", k.side}});
    return {{"base", base_name(spec_.base)},
            {"mirrored", spec_.mirrored},
            {"unknot", spec_.unknot()},
            {"crossing_count", spec_.crossings.size()},
            {"kinks", kinks}};
  }

  nlohmann::json geometry() const override {
    nlohmann::json c = nlohmann::json::array();
    for (const Crossing& x : spec_.crossings) c.push_back({{"x", x.at.x}, {"y", x.at.y}, {"sign", x.sign}});
    return {{"crossings", c}};
  }

  std::optional<bool> binary_answer() const override { return spec_.unknot(); }

 private:
  KnotSpec spec_;
};

}  // namespace

std::string_view base_name(Base b) {
  switch (b) {
    case Base::circle: return "circle";
    case Base::trefoil: return "trefoil";
    case Base::figure_eight: return "figure_eight";
    case Base::cinquefoil: return "cinquefoil";
    case Base::septafoil: return "septafoil";
  }
  return "?";
}

int base_crossings(Base b) {
  switch (b) {
    case Base::circle: return 0;
    case Base::trefoil: return 3;
    case Base::figure_eight: return 4;
    case Base::cinquefoil: return 5;
    case Base::septafoil: return 7;
  }
  return 0;
}

void trace(KnotSpec& spec) {
  std::vector<P3> base(kSamples);
  const double c = std::cos(spec.rotation), s = std::sin(spec.rotation);
  for (int i = 0; i < kSamples; ++i) {
    const P3 p = base_point(spec.base, 2 * std::numbers::pi * i / kSamples);
    base[i] = {c * p.x - s * p.y, s * p.x + c * p.y, spec.mirrored ? -p.z : p.z};
  }
  // Fit into the drawing box, leaving room for curls.
  double lx = 1e18, ly = 1e18, hx = -1e18, hy = -1e18;
  for (const P3& p : base) {
    lx = std::min(lx, p.x), hx = std::max(hx, p.x);
    ly = std::min(ly, p.y), hy = std::max(hy, p.y);
  }
  constexpr double bx0 = 210, by0 = 170, bx1 = 790, by1 = 740;
  const double scale = std::min((bx1 - bx0) / (hx - lx), (by1 - by0) / (hy - ly));
  const double ox = (bx0 + bx1) / 2 - scale * (lx + hx) / 2, oy = (by0 + by1) / 2 - scale * (ly + hy) / 2;
  std::vector<Point> xy(kSamples);
  for (int i = 0; i < kSamples; ++i) xy[i] = {ox + scale * base[i].x, oy + scale * base[i].y};

  std::vector<double> arc(kSamples + 1, 0.0);
  for (int i = 0; i < kSamples; ++i) {
    const Point a = xy[i], b = xy[(i + 1) % kSamples];
    arc[i + 1] = arc[i] + std::hypot(b.x - a.x, b.y - a.y);
  }
  const double total = arc[kSamples];

  // A curl on a tight bend folds into a cusp; record how much the base
  // turns under each curl.
  spec.max_curl_turn = 0;
  for (const Kink& k : spec.kinks) {
    auto tangent_at = [&](double at) {
      at -= total * std::floor(at / total);
      const auto i = static_cast<std::size_t>(std::upper_bound(arc.begin(), arc.end(), at) - arc.begin() - 1) % kSamples;
      const Point a = xy[i], b = xy[(i + 1) % kSamples];
      return std::atan2(b.y - a.y, b.x - a.x);
    };
    double turn = tangent_at(k.s * total + kCurlSpan / 2) - tangent_at(k.s * total - kCurlSpan / 2);
    turn = std::abs(std::remainder(turn, 2 * std::numbers::pi));
    spec.max_curl_turn = std::max(spec.max_curl_turn, turn);
  }

  spec.path.clear();
  spec.z.clear();
  for (int i = 0; i < kSamples; ++i) {
    Point p = xy[i];
    double z = base[i].z;
    const Point prev = xy[(i + kSamples - 1) % kSamples], next = xy[(i + 1) % kSamples];
    const double tl = std::hypot(next.x - prev.x, next.y - prev.y);
    const Point t{(next.x - prev.x) / tl, (next.y - prev.y) / tl}, n{-t.y, t.x};
    for (const Kink& k : spec.kinks) {
      double d = arc[i] - k.s * total;
      d -= total * std::round(d / total);
      if (std::abs(d) >= kCurlSpan / 2) continue;
      // Prolate-cycloid arch: one loop, one self-crossing at its foot.
      const double u = d / kCurlSpan + 0.5, w = 2 * std::numbers::pi * u;
      const double along = kCurlSpan * (u - 0.5) + kCurl * std::sin(w);
      const double across = k.side * kCurl * (1 - std::cos(w));
      p = {p.x + t.x * (along - d) + n.x * across, p.y + t.y * (along - d) + n.y * across};
      z += k.sign * 6.0 * (u - 0.5);
    }
    spec.path.push_back(p);
    spec.z.push_back(z);
  }
  spec.crossings = find_crossings(spec.path, spec.z);
}

std::vector<Crossing> find_crossings(const std::vector<Point>& path, const std::vector<double>& z) {
  const std::size_t m = path.size();
  constexpr double cell = 12;
  std::vector<std::pair<std::pair<long, long>, std::size_t>> cells;
  for (std::size_t i = 0; i < m; ++i) {
    const Point a = path[i], b = path[(i + 1) % m];
    const long x0 = std::lround(std::floor(std::min(a.x, b.x) / cell)), x1 = std::lround(std::floor(std::max(a.x, b.x) / cell));
    const long y0 = std::lround(std::floor(std::min(a.y, b.y) / cell)), y1 = std::lround(std::floor(std::max(a.y, b.y) / cell));
    for (long gx = x0; gx <= x1; ++gx) {
      for (long gy = y0; gy <= y1; ++gy) cells.push_back({{gx, gy}, i});
    }
  }
  std::sort(cells.begin(), cells.end());
  std::set<std::pair<std::size_t, std::size_t>> seen;
  std::vector<Crossing> out;
  for (std::size_t lo = 0, hi = 0; lo < cells.size(); lo = hi) {
    while (hi < cells.size() && cells[hi].first == cells[lo].first) ++hi;
    for (std::size_t x = lo; x < hi; ++x) {
      for (std::size_t y = x + 1; y < hi; ++y) {
        std::size_t i = cells[x].second, j = cells[y].second;
        if (i > j) std::swap(i, j);
        if (j - i <= 1 || (i == 0 && j == m - 1)) continue;
        const Point a = path[i], b = path[(i + 1) % m], c = path[j], d = path[(j + 1) % m];
        const Point r{b.x - a.x, b.y - a.y}, s{d.x - c.x, d.y - c.y};
        const double den = cross(r, s);
        if (std::abs(den) < 1e-12) continue;
        const Point ac{c.x - a.x, c.y - a.y};
        const double ta = cross(ac, s) / den, tb = cross(ac, r) / den;
        // Half-open so a crossing exactly at a vertex counts once.
        if (ta < 0 || ta >= 1 || tb < 0 || tb >= 1) continue;
        if (!seen.insert({i, j}).second) continue;
        const double za = z[i] + ta * (z[(i + 1) % m] - z[i]);
        const double zb = z[j] + tb * (z[(j + 1) % m] - z[j]);
        Crossing cr;
        cr.at = {a.x + ta * r.x, a.y + ta * r.y};
        const bool a_over = za > zb;
        cr.over = a_over ? i : j;
        cr.under = a_over ? j : i;
        const Point o = a_over ? r : s, u = a_over ? s : r;
        // Scene y points down; flip to the usual orientation.
        cr.sign = -cross(o, u) > 0 ? 1 : -1;
        out.push_back(cr);
      }
    }
  }
  std::sort(out.begin(), out.end(), [](const Crossing& p, const Crossing& q) { return p.over < q.over; });
  return out;
}

// Strands that pass close without crossing would read as touching.
bool clear_of_near_misses(const KnotSpec& spec) {
  constexpr double gap = 3 * kStroke, cell = gap;
  const std::size_t m = spec.path.size();
  std::vector<std::pair<std::pair<long, long>, std::size_t>> cells;
  for (std::size_t i = 0; i < m; i += 2) {
    cells.push_back({{std::lround(std::floor(spec.path[i].x / cell)), std::lround(std::floor(spec.path[i].y / cell))}, i});
  }
  std::sort(cells.begin(), cells.end());
  auto near_crossing = [&](Point p) {
    for (const Crossing& c : spec.crossings) {
      if (std::hypot(p.x - c.at.x, p.y - c.at.y) < 5 * kStroke) return true;
    }
    return false;
  };
  // Along-curve distance below which two samples are the same strand.
  std::vector<double> arc(m + 1, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    const Point a = spec.path[i], b = spec.path[(i + 1) % m];
    arc[i + 1] = arc[i] + std::hypot(b.x - a.x, b.y - a.y);
  }
  for (const auto& [key, i] : cells) {
    for (long dx = -1; dx <= 1; ++dx) {
      for (long dy = -1; dy <= 1; ++dy) {
        const std::pair<long, long> k{key.first + dx, key.second + dy};
        auto it = std::lower_bound(cells.begin(), cells.end(), std::pair{k, std::size_t{0}});
        for (; it != cells.end() && it->first == k; ++it) {
          const std::size_t j = it->second;
          if (j <= i) continue;
          double along = arc[j] - arc[i];
          along = std::min(along, arc[m] - along);
          const Point a = spec.path[i], b = spec.path[j];
          const double d = std::hypot(a.x - b.x, a.y - b.y);
          if (d < gap && along > 4 * gap && !near_crossing(a)) return false;
        }
      }
    }
  }
  return true;
}

KnotSpec build(int crossings, bool unknot, Rng& rng) {
  std::vector<Base> pool;
  if (!unknot) {
    for (Base b : {Base::trefoil, Base::figure_eight, Base::cinquefoil, Base::septafoil}) {
      if (base_crossings(b) <= crossings) pool.push_back(b);
    }
  }
  if (pool.empty()) pool.push_back(Base::circle);
  auto clean = [&](const KnotSpec& spec, int expected) {
    if (spec.max_curl_turn > kMaxCurlTurn || static_cast<int>(spec.crossings.size()) != expected) return false;
    const std::size_t m = spec.path.size();
    for (std::size_t i = 0; i < spec.crossings.size(); ++i) {
      const Crossing& a = spec.crossings[i];
      const Point o = spec.path[(a.over + 1) % m], o0 = spec.path[a.over];
      const Point u = spec.path[(a.under + 1) % m], u0 = spec.path[a.under];
      const Point dv{o.x - o0.x, o.y - o0.y}, du{u.x - u0.x, u.y - u0.y};
      if (std::abs(cross(dv, du)) < kMinCrossingSine * std::hypot(dv.x, dv.y) * std::hypot(du.x, du.y)) return false;
      for (std::size_t j = i + 1; j < spec.crossings.size(); ++j) {
        const Point b = spec.crossings[j].at;
        if (std::hypot(a.at.x - b.x, a.at.y - b.y) < kMinCrossingGap) return false;
      }
    }
    return clear_of_near_misses(spec);
  };
  for (int attempt = 0; attempt < 20; ++attempt) {
    KnotSpec spec;
    spec.base = rng.pick(pool);
    spec.mirrored = rng.bernoulli(0.5);
    spec.rotation = rng.uniform(0, 2 * std::numbers::pi);
    trace(spec);
    if (!clean(spec, base_crossings(spec.base))) continue;
    const int curls = crossings - base_crossings(spec.base);
    // One curl per equal slot of the arc, kept off the slot edges so
    // neighbouring curls never overlap. A curl that lands badly is
    // re-placed within its slot.
    const double offset = rng.uniform01();
    bool placed = true;
    for (int i = 0; i < curls && placed; ++i) {
      placed = false;
      for (int tries = 0; tries < 25 && !placed; ++tries) {
        const double at = offset + (i + rng.uniform(0.3, 0.7)) / curls;
        spec.kinks.push_back({at - std::floor(at), rng.bernoulli(0.5) ? 1 : -1, rng.bernoulli(0.5) ? 1 : -1});
        trace(spec);
        placed = clean(spec, base_crossings(spec.base) + i + 1);
        if (!placed) spec.kinks.pop_back();
      }
    }
    if (placed) return spec;
  }
  throw GenerationRetry("unknot: could not place curls cleanly");
}

Scene render_puzzle(const KnotSpec& spec) {
  Scene s;
  std::vector<Point> closed = spec.path;
  closed.push_back(spec.path.front());
  s.polyline(closed, palette::wall_black, kStroke);
  const std::size_t m = spec.path.size();
  for (const Crossing& c : spec.crossings) {
    // Re-draw the over strand on a white halo, cutting the under strand.
    std::vector<Point> strand;
    double back = 0, fwd = 0;
    std::size_t lo = c.over, hi = (c.over + 1) % m;
    while (back < 2.2 * kStroke) {
      const std::size_t prev = (lo + m - 1) % m;
      back += std::hypot(spec.path[lo].x - spec.path[prev].x, spec.path[lo].y - spec.path[prev].y);
      lo = prev;
    }
    while (fwd < 2.2 * kStroke) {
      const std::size_t next = (hi + 1) % m;
      fwd += std::hypot(spec.path[next].x - spec.path[hi].x, spec.path[next].y - spec.path[hi].y);
      hi = next;
    }
    for (std::size_t i = lo; i != hi; i = (i + 1) % m) strand.push_back(spec.path[i]);
    strand.push_back(spec.path[hi]);
    s.polyline(strand, palette::background_white, 2.8 * kStroke);
    s.polyline(strand, palette::wall_black, kStroke);
    s.circle(c.at.x, c.at.y, 1.3 * kStroke, c.sign > 0 ? palette::positive_blue : palette::negative_red);
  }
  // Answer key: green check = unknot, red cross = knotted.
  s.circle(230, 920, 35, palette::badge_green);
  s.polyline({{213, 920}, {226, 934}, {248, 906}}, palette::background_white, 8);
  s.text(380, 920, 44, "UNKNOT", palette::wall_black);
  s.circle(610, 920, 35, palette::badge_red);
  s.line({596, 906}, {624, 934}, palette::background_white, 8);
  s.line({596, 934}, {624, 906}, palette::background_white, 8);
  s.text(725, 920, 44, "KNOT", palette::wall_black);
  return s;
}

}  // namespace tacit::knot

namespace tacit::tasks {

PuzzleInstance generate_knot(const Params& params, Rng& rng) {
  using namespace tacit::knot;
  const int target = static_cast<int>(params.at("crossings"));
  const bool coin = rng.bernoulli(0.5);
  KnotSpec spec = build(target, coin || target < 3, rng);
  PuzzleInstance inst;
  inst.puzzle = render_puzzle(spec);
  badge::add_opposite_distractors(inst, spec.unknot());
  inst.spec = std::make_shared<KnotTask>(std::move(spec));
  return inst;
}

}  // namespace tacit::tasks
