#include "tacit/tasks/graph.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <numeric>
#include <functional>
#include <set>

#include "tacit/core/errors.hpp"
#include "tacit/scene/palette.hpp"
#include "tacit/tasks/badge.hpp"
#include "tacit/tasks/generators.hpp"
#include "tacit/vision/vision.hpp"

namespace tacit::graph {

namespace {

double dist(Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y); }

double segment_distance(Point p, Point a, Point b) {
  const double dx = b.x - a.x, dy = b.y - a.y;
  const double t = std::clamp(((p.x - a.x) * dx + (p.y - a.y) * dy) / (dx * dx + dy * dy), 0.0, 1.0);
  return dist(p, {a.x + t * dx, a.y + t * dy});
}

struct DisjointSet {
  std::vector<int> parent;
  explicit DisjointSet(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); }
  bool unite(int a, int b) {
    a = find(a), b = find(b);
    if (a == b) return false;
    parent[a] = b;
    return true;
  }
};

Edge ordered(int a, int b) { return a < b ? Edge{a, b} : Edge{b, a}; }

// Fits points into the box [x0, x1] x [y0, y1], keeping the aspect ratio.
std::vector<Point> fit(std::vector<Point> pts, double x0, double y0, double x1, double y1) {
  double lx = 1e18, ly = 1e18, hx = -1e18, hy = -1e18;
  for (const Point& p : pts) {
    lx = std::min(lx, p.x), hx = std::max(hx, p.x);
    ly = std::min(ly, p.y), hy = std::max(hy, p.y);
  }
  const double s = std::min((x1 - x0) / std::max(hx - lx, 1e-9), (y1 - y0) / std::max(hy - ly, 1e-9));
  const double ox = (x0 + x1) / 2 - s * (lx + hx) / 2, oy = (y0 + y1) / 2 - s * (ly + hy) / 2;
  for (Point& p : pts) p = {ox + s * p.x, oy + s * p.y};
  return pts;
}

double min_spacing(const std::vector<Point>& pts) {
  double m = 1e18;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = i + 1; j < pts.size(); ++j) m = std::min(m, dist(pts[i], pts[j]));
  }
  return m;
}

// Edges that pass too close to a third node would read as touching it.
bool edges_clear(const Graph& g, const std::vector<Point>& pos, double clearance) {
  for (const auto& [a, b] : g.edges) {
    for (int v = 0; v < g.n; ++v) {
      if (v != a && v != b && segment_distance(pos[v], pos[a], pos[b]) < clearance) return false;
    }
  }
  return true;
}

constexpr int kGray = 6, kWhite = 7, kBlack = 8;

vision::ClassSet node_classes() {
  vision::ClassSet set;
  for (int i = 0; i < static_cast<int>(palette::node.size()); ++i) set.classes.push_back({i, palette::node[i], false});
  set.classes.push_back({kGray, palette::neutral_gray, false});
  set.classes.push_back({kWhite, palette::background_white, true});
  set.classes.push_back({kBlack, palette::wall_black, true});
  return set;
}

nlohmann::json graph_json(const Graph& g) {
  nlohmann::json e = nlohmann::json::array();
  for (const auto& [a, b] : g.edges) e.push_back({a, b});
  return {{"n", g.n}, {"edges", e}};
}

nlohmann::json points_json(const std::vector<Point>& pts) {
  nlohmann::json out = nlohmann::json::array();
  for (const Point& p : pts) out.push_back({p.x, p.y});
  return out;
}

class ColoringTask final : public TaskSpec {
 public:
  explicit ColoringTask(ColoringSpec spec) : spec_(std::move(spec)) {}

  VerificationResult verify(const RasterImage& candidate, const VerifyOptions&) const override {
    return judge_coloring(spec_, read_node_colors(candidate, spec_));
  }

  nlohmann::json structure() const override {
    nlohmann::json j = graph_json(spec_.graph);
    j["k"] = spec_.k;
    j["solution"] = spec_.solution;
    return j;
  }

  nlohmann::json geometry() const override {
    return {{"nodes", points_json(spec_.pos)}, {"radius", spec_.radius}};
  }

 private:
  ColoringSpec spec_;
};

class IsoTask final : public TaskSpec {
 public:
  explicit IsoTask(IsoPairSpec spec) : spec_(std::move(spec)) {}

  VerificationResult verify(const RasterImage& candidate, const VerifyOptions&) const override {
    return badge::verify(candidate, spec_.isomorphic);
  }

  nlohmann::json structure() const override {
    nlohmann::json j = {{"g1", graph_json(spec_.g1)}, {"g2", graph_json(spec_.g2)}, {"isomorphic", spec_.isomorphic}};
    if (spec_.isomorphic) j["witness"] = spec_.witness;
    return j;
  }

  nlohmann::json geometry() const override {
    return {{"g1", points_json(spec_.pos1)}, {"g2", points_json(spec_.pos2)}};
  }

  std::optional<bool> binary_answer() const override { return spec_.isomorphic; }

 private:
  IsoPairSpec spec_;
};

}  // namespace

Graph::Graph(int nodes, std::vector<Edge> e) : n(nodes), edges(std::move(e)), adj(nodes, 0) {
  for (auto& [a, b] : edges) {
    if (a > b) std::swap(a, b);
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  for (const auto& [a, b] : edges) {
    adj[a] |= 1u << b;
    adj[b] |= 1u << a;
  }
}

int Graph::degree(int v) const { return std::popcount(adj[v]); }

bool Graph::connected() const {
  if (n == 0) return true;
  std::uint32_t seen = 1, frontier = 1;
  while (frontier) {
    std::uint32_t next = 0;
    for (std::uint32_t m = frontier; m; m &= m - 1) next |= adj[std::countr_zero(m)];
    frontier = next & ~seen;
    seen |= next;
  }
  return std::popcount(seen) == n;
}

std::vector<Edge> delaunay(const std::vector<Point>& pts) {
  // Empty-circumcircle test over all triples. Graphs here have at most a
  // few dozen nodes, and unlike an incremental super-triangle build this
  // never loses hull edges.
  const int n = static_cast<int>(pts.size());
  auto orient = [&](int a, int b, int c) {
    return (pts[b].x - pts[a].x) * (pts[c].y - pts[a].y) - (pts[b].y - pts[a].y) * (pts[c].x - pts[a].x);
  };
  auto in_circle = [&](int a, int b, int c, int d) {
    const double ax = pts[a].x - pts[d].x, ay = pts[a].y - pts[d].y;
    const double bx = pts[b].x - pts[d].x, by = pts[b].y - pts[d].y;
    const double cx = pts[c].x - pts[d].x, cy = pts[c].y - pts[d].y;
    return (ax * ax + ay * ay) * (bx * cy - cx * by) - (bx * bx + by * by) * (ax * cy - cx * ay) +
           (cx * cx + cy * cy) * (ax * by - bx * ay);
  };
  std::set<Edge> edges;
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      for (int c = b + 1; c < n; ++c) {
        const double o = orient(a, b, c);
        if (o == 0) continue;
        bool empty = true;
        for (int d = 0; d < n && empty; ++d) {
          if (d != a && d != b && d != c) empty = (o > 0 ? in_circle(a, b, c, d) : -in_circle(a, b, c, d)) <= 0;
        }
        if (empty) {
          edges.insert({a, b});
          edges.insert({b, c});
          edges.insert({a, c});
        }
      }
    }
  }
  return {edges.begin(), edges.end()};
}

// ---- coloring ----------------------------------------------------------

std::optional<std::vector<int>> exact_coloring(const Graph& g, int k, Rng* rng) {
  const int n = g.n;
  if (k > n || k < 1) return std::nullopt;
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return g.degree(a) > g.degree(b); });
  std::vector<int> color(n, -1);
  // Colors are introduced in order (symmetry breaking); a node may open
  // color `used` only if it is below k.
  std::function<bool(int, int)> go = [&](int i, int used) -> bool {
    if (k - used > n - i) return false;
    if (i == n) return used == k;
    const int v = order[i];
    for (int c = 0; c < std::min(used + 1, k); ++c) {
      bool ok = true;
      for (std::uint32_t m = g.adj[v]; m && ok; m &= m - 1) ok = color[std::countr_zero(m)] != c;
      if (!ok) continue;
      color[v] = c;
      if (go(i + 1, std::max(used, c + 1))) return true;
    }
    color[v] = -1;
    return false;
  };
  if (!go(0, 0)) return std::nullopt;
  if (rng) {
    std::vector<int> relabel(k);
    std::iota(relabel.begin(), relabel.end(), 0);
    rng->shuffle(relabel);
    for (int& c : color) c = relabel[c];
  }
  return color;
}

ColoringSpec build_coloring(int n, double density, int k, Rng& rng) {
  constexpr double lo = 140, hi = 860;
  const double dmin = 0.75 * (hi - lo) / std::sqrt(static_cast<double>(n));
  for (int attempt = 0; attempt < 40; ++attempt) {
    std::vector<Point> pts;
    for (int tries = 0; static_cast<int>(pts.size()) < n && tries < 20000; ++tries) {
      const Point q{rng.uniform(lo, hi), rng.uniform(lo, hi)};
      if (std::all_of(pts.begin(), pts.end(), [&](Point o) { return dist(o, q) >= dmin; })) pts.push_back(q);
    }
    if (static_cast<int>(pts.size()) < n) continue;
    const double radius = std::min(40.0, 0.3 * dmin);

    std::vector<Edge> cand;
    for (const Edge& e : delaunay(pts)) {
      bool clear = true;
      for (int v = 0; v < n && clear; ++v) {
        if (v != e.first && v != e.second) clear = segment_distance(pts[v], pts[e.first], pts[e.second]) >= 1.5 * radius;
      }
      if (clear) cand.push_back(e);
    }
    rng.shuffle(cand);
    // Random spanning tree first, then a `density` share of the rest.
    DisjointSet ds(n);
    std::vector<Edge> tree, rest;
    for (const Edge& e : cand) (ds.unite(e.first, e.second) ? tree : rest).push_back(e);
    if (static_cast<int>(tree.size()) != n - 1) continue;
    const auto extra = static_cast<std::size_t>(std::lround(density * static_cast<double>(rest.size())));
    tree.insert(tree.end(), rest.begin(), rest.begin() + static_cast<long>(std::min(extra, rest.size())));
    Graph g(n, tree);
    auto col = exact_coloring(g, k, &rng);
    if (!col) continue;
    return {std::move(g), std::move(pts), radius, k, std::move(*col)};
  }
  throw GenerationRetry("graph_coloring: no k-colorable layout");
}

std::vector<int> read_node_colors(const RasterImage& image, const ColoringSpec& spec) {
  const vision::ClassSet set = node_classes();
  const double scale = image.width / kCanvasUnits;
  const int n = spec.graph.n;
  const double r_in = 0.5 * spec.radius, r_out = 0.85 * spec.radius;
  std::vector<int> out(n, -1);
  for (int v = 0; v < n; ++v) {
    const Point c = spec.pos[v];
    const auto [x0, x1] = vision::pixel_span(c.x - r_out, c.x + r_out, scale, image.width);
    const auto [y0, y1] = vision::pixel_span(c.y - r_out, c.y + r_out, scale, image.height);
    std::array<long long, 9> votes{};
    long long total = 0;
    for (int py = y0; py < y1; ++py) {
      for (int px = x0; px < x1; ++px) {
        const Point q{(px + 0.5) / scale, (py + 0.5) / scale};
        const double d = dist(q, c);
        if (d < r_in || d > r_out) continue;
        // Occlusion: the pixel belongs to whichever node center is nearest.
        bool mine = true;
        for (int u = 0; u < n && mine; ++u) mine = u == v || dist(q, spec.pos[u]) >= d;
        if (!mine) continue;
        ++total;
        const int id = vision::classify_color(image.pixel(px, py), set);
        if (id >= 0) ++votes[id];
      }
    }
    int best = -1;
    for (int id = 0; id <= kGray; ++id) {
      if (votes[id] > 0 && (best < 0 || votes[id] > votes[best])) best = id;
    }
    if (best >= 0 && best != kGray && votes[best] * 4 >= total) out[v] = best;
  }
  return out;
}

VerificationResult judge_coloring(const ColoringSpec& spec, const std::vector<int>& colors) {
  nlohmann::json failed = nlohmann::json::array();
  nlohmann::json d = nlohmann::json::object();
  std::vector<int> blank;
  for (int v = 0; v < spec.graph.n; ++v) {
    if (colors[v] < 0) blank.push_back(v);
  }
  if (!blank.empty()) {
    failed.push_back("completeness");
    d["uncolored"] = blank;
  }
  nlohmann::json conflicts = nlohmann::json::array();
  for (const auto& [a, b] : spec.graph.edges) {
    if (colors[a] >= 0 && colors[a] == colors[b]) conflicts.push_back({a, b});
  }
  if (!conflicts.empty()) {
    failed.push_back("proper");
    d["conflicts"] = conflicts;
  }
  std::set<int> used;
  for (int c : colors) {
    if (c >= 0) used.insert(c);
  }
  d["colors_used"] = used.size();
  d["k"] = spec.k;
  if (static_cast<int>(used.size()) != spec.k) failed.push_back("exact");
  if (failed.empty()) return VerificationResult::ok(d);
  d["failed_checks"] = failed;
  d["diagnosis"] = failed[0];
  return VerificationResult::fail("coloring check failed: " + failed[0].get<std::string>(), d);
}

Scene render_coloring(const ColoringSpec& spec, const std::vector<int>* colors) {
  Scene s;
  s.text(90, 60, 50, "K=" + std::to_string(spec.k), palette::wall_black);
  const double r = spec.radius;
  for (const auto& [a, b] : spec.graph.edges) s.line(spec.pos[a], spec.pos[b], palette::wall_black, 0.12 * r);
  for (int v = 0; v < spec.graph.n; ++v) {
    const Color fill = colors ? palette::node[(*colors)[v]] : palette::neutral_gray;
    s.circle(spec.pos[v].x, spec.pos[v].y, r, fill, palette::wall_black, 0.08 * r);
    s.text(spec.pos[v].x, spec.pos[v].y, 0.55 * r, std::to_string(v + 1), palette::wall_black);
  }
  return s;
}

// ---- isomorphism ---------------------------------------------------------

std::optional<std::vector<int>> find_isomorphism(const Graph& a, const Graph& b) {
  const int n = a.n;
  if (b.n != n || a.edges.size() != b.edges.size()) return std::nullopt;
  // Joint color refinement so class ids are comparable across graphs.
  std::vector<int> ca(n), cb(n);
  for (int v = 0; v < n; ++v) ca[v] = a.degree(v), cb[v] = b.degree(v);
  for (int round = 0; round < n; ++round) {
    std::map<std::pair<int, std::vector<int>>, int> ids;
    auto signature = [](const Graph& g, const std::vector<int>& c, int v) {
      std::vector<int> nb;
      for (std::uint32_t m = g.adj[v]; m; m &= m - 1) nb.push_back(c[std::countr_zero(m)]);
      std::sort(nb.begin(), nb.end());
      return std::pair{c[v], nb};
    };
    std::vector<std::pair<int, std::vector<int>>> sa(n), sb(n);
    for (int v = 0; v < n; ++v) {
      sa[v] = signature(a, ca, v);
      sb[v] = signature(b, cb, v);
      ids.emplace(sa[v], 0);
      ids.emplace(sb[v], 0);
    }
    int next = 0;
    for (auto& [k, id] : ids) id = next++;
    std::vector<int> na(n), nb(n);
    for (int v = 0; v < n; ++v) na[v] = ids[sa[v]], nb[v] = ids[sb[v]];
    const bool stable = std::set(na.begin(), na.end()).size() == std::set(ca.begin(), ca.end()).size();
    ca = std::move(na), cb = std::move(nb);
    if (stable) break;
  }
  std::vector<int> ha(ca), hb(cb);
  std::sort(ha.begin(), ha.end());
  std::sort(hb.begin(), hb.end());
  if (ha != hb) return std::nullopt;

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::map<int, int> class_size;
  for (int c : ca) ++class_size[c];
  std::stable_sort(order.begin(), order.end(), [&](int x, int y) { return class_size[ca[x]] < class_size[ca[y]]; });
  std::vector<int> map(n, -1);
  std::uint32_t taken = 0;
  std::function<bool(int)> go = [&](int i) -> bool {
    if (i == n) return true;
    const int u = order[i];
    for (int v = 0; v < n; ++v) {
      if ((taken >> v) & 1u || cb[v] != ca[u]) continue;
      bool ok = true;
      for (int j = 0; j < i && ok; ++j) ok = a.has_edge(u, order[j]) == b.has_edge(v, map[order[j]]);
      if (!ok) continue;
      map[u] = v;
      taken |= 1u << v;
      if (go(i + 1)) return true;
      taken &= ~(1u << v);
    }
    map[u] = -1;
    return false;
  };
  if (!go(0)) return std::nullopt;
  return map;
}

std::vector<Point> spring_layout(const Graph& g, Rng& rng, int iterations) {
  const int n = g.n;
  const double k = std::sqrt(1.0 / n);
  std::vector<Point> pos(n);
  for (Point& p : pos) p = {rng.uniform01(), rng.uniform01()};
  for (int it = 0; it < iterations; ++it) {
    const double temp = 0.1 * (1.0 - static_cast<double>(it) / iterations) + 1e-3;
    std::vector<Point> disp(n, {0, 0});
    for (int u = 0; u < n; ++u) {
      for (int v = 0; v < n; ++v) {
        if (u == v) continue;
        double dx = pos[u].x - pos[v].x, dy = pos[u].y - pos[v].y;
        const double d = std::max(std::hypot(dx, dy), 1e-4);
        double f = k * k / d;
        if (g.has_edge(u, v)) f -= d * d / k;
        disp[u].x += dx / d * f;
        disp[u].y += dy / d * f;
      }
    }
    for (int u = 0; u < n; ++u) {
      const double d = std::max(std::hypot(disp[u].x, disp[u].y), 1e-9);
      const double step = std::min(d, temp);
      pos[u].x += disp[u].x / d * step;
      pos[u].y += disp[u].y / d * step;
    }
  }
  return pos;
}

namespace {

constexpr double kIsoNode = 13;

// Pushes apart nodes that sit too close to each other or to an edge they
// are not on. Moves are local, so the (noisy) drawing keeps its shape.
void declutter(const Graph& g, std::vector<Point>& pos) {
  const double gap = 3.2 * kIsoNode, clear = 1.8 * kIsoNode;
  for (int it = 0; it < 300; ++it) {
    bool moved = false;
    for (int u = 0; u < g.n; ++u) {
      for (int v = u + 1; v < g.n; ++v) {
        const double d = std::max(dist(pos[u], pos[v]), 1e-6);
        if (d >= gap) continue;
        const double push = (gap - d) / 2 / d;
        const double dx = (pos[u].x - pos[v].x) * push, dy = (pos[u].y - pos[v].y) * push;
        pos[u].x += dx, pos[u].y += dy, pos[v].x -= dx, pos[v].y -= dy;
        moved = true;
      }
    }
    for (const auto& [a, b] : g.edges) {
      for (int v = 0; v < g.n; ++v) {
        if (v == a || v == b) continue;
        const Point A = pos[a], B = pos[b];
        const double ex = B.x - A.x, ey = B.y - A.y;
        const double t = std::clamp(((pos[v].x - A.x) * ex + (pos[v].y - A.y) * ey) / (ex * ex + ey * ey), 0.0, 1.0);
        const Point q{A.x + t * ex, A.y + t * ey};
        double d = dist(pos[v], q);
        if (d >= clear) continue;
        double nx = pos[v].x - q.x, ny = pos[v].y - q.y;
        if (d < 1e-6) nx = -ey, ny = ex, d = std::hypot(ex, ey);
        const double push = (clear - d) / d;
        pos[v].x += nx * push * 0.6, pos[v].y += ny * push * 0.6;
        pos[a].x -= nx * push * 0.2, pos[a].y -= ny * push * 0.2;
        pos[b].x -= nx * push * 0.2, pos[b].y -= ny * push * 0.2;
        moved = true;
      }
    }
    if (!moved) break;
  }
}

bool readable(const Graph& g, const std::vector<Point>& pos) {
  return min_spacing(pos) >= 2.6 * kIsoNode && edges_clear(g, pos, 1.15 * kIsoNode);
}

std::optional<std::vector<Point>> place(const Graph& g, double distortion, double x0, Rng& rng) {
  for (int tries = 0; tries < 60; ++tries) {
    auto pos = spring_layout(g, rng);
    double mean = 0;
    for (const auto& [a, b] : g.edges) mean += dist(pos[a], pos[b]);
    mean /= std::max<std::size_t>(g.edges.size(), 1);
    for (Point& p : pos) {
      p.x += distortion * mean * rng.normal();
      p.y += distortion * mean * rng.normal();
    }
    pos = fit(std::move(pos), x0, 190, x0 + 400, 800);
    declutter(g, pos);
    pos = fit(std::move(pos), x0, 190, x0 + 400, 800);
    if (readable(g, pos)) return pos;
  }
  return std::nullopt;
}

}  // namespace

namespace {

Graph random_connected(int n, Rng& rng) {
  const int pairs = n * (n - 1) / 2;
  const int m = std::max(n, static_cast<int>(std::lround(rng.uniform(0.3, 0.5) * pairs)));
  // Random spanning tree plus random extra edges.
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  rng.shuffle(perm);
  std::set<Edge> edges;
  for (int i = 1; i < n; ++i) edges.insert(ordered(perm[i], perm[rng.index(i)]));
  std::vector<Edge> others;
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      if (!edges.count({a, b})) others.push_back({a, b});
    }
  }
  rng.shuffle(others);
  for (std::size_t i = 0; static_cast<int>(edges.size()) < m && i < others.size(); ++i) edges.insert(others[i]);
  return Graph(n, {edges.begin(), edges.end()});
}

Graph relabel(const Graph& g, const std::vector<int>& perm) {
  std::vector<Edge> e;
  for (const auto& [a, b] : g.edges) e.push_back(ordered(perm[a], perm[b]));
  return Graph(g.n, e);
}

// Degree-preserving double edge swap (a,b),(c,d) -> (a,d),(c,b) that leaves
// the graph connected and certifiably non-isomorphic.
std::optional<Graph> swapped_variant(const Graph& g, Rng& rng) {
  for (int tries = 0; tries < 400; ++tries) {
    const Edge e = rng.pick(g.edges), f = rng.pick(g.edges);
    auto [a, b] = e;
    auto [c, d] = f;
    if (rng.bernoulli(0.5)) std::swap(c, d);
    if (a == c || a == d || b == c || b == d) continue;
    if (g.has_edge(a, d) || g.has_edge(c, b)) continue;
    std::vector<Edge> e2;
    for (const Edge& x : g.edges) {
      if (x != e && x != f) e2.push_back(x);
    }
    e2.push_back(ordered(a, d));
    e2.push_back(ordered(c, b));
    Graph g2(g.n, e2);
    if (g2.connected() && !find_isomorphism(g, g2)) return g2;
  }
  return std::nullopt;
}

}  // namespace

IsoPairSpec build_isopair(int n, double distortion, Rng& rng) {
  IsoPairSpec spec;
  spec.isomorphic = rng.bernoulli(0.5);
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  // A fresh G1 is drawn until it admits a non-isomorphic swap, so the
  // answer coin is never re-flipped.
  for (int tries = 0; spec.g2.n == 0; ++tries) {
    if (tries == 50) throw GenerationRetry("graph_isomorphism: no non-isomorphic swap");
    spec.g1 = random_connected(n, rng);
    rng.shuffle(perm);  // relabel so node ids carry no hint
    if (spec.isomorphic) {
      spec.g2 = relabel(spec.g1, perm);
      spec.witness = perm;
    } else if (auto g2 = swapped_variant(spec.g1, rng)) {
      spec.g2 = relabel(*g2, perm);
    }
  }

  auto p1 = place(spec.g1, 0.0, 60, rng);
  auto p2 = place(spec.g2, distortion, 540, rng);
  if (!p1 || !p2) throw GenerationRetry("graph_isomorphism: unreadable layout");
  spec.pos1 = std::move(*p1);
  spec.pos2 = std::move(*p2);
  return spec;
}

Scene render_isopair(const IsoPairSpec& spec) {
  Scene s;
  auto draw = [&](const Graph& g, const std::vector<Point>& pos) {
    for (const auto& [a, b] : g.edges) s.line(pos[a], pos[b], palette::wall_black, 5);
    for (const Point& p : pos) s.circle(p.x, p.y, kIsoNode, palette::filled_navy);
  };
  s.text(260, 90, 60, "A", palette::wall_black);
  s.text(740, 90, 60, "B", palette::wall_black);
  draw(spec.g1, spec.pos1);
  draw(spec.g2, spec.pos2);
  s.line({500, 140}, {500, 850}, palette::neutral_gray, 4);
  // Answer key: green check = same graph, red cross = different.
  s.circle(300, 920, 35, palette::badge_green);
  s.polyline({{283, 920}, {296, 934}, {318, 906}}, palette::background_white, 8);
  s.text(410, 920, 44, "SAME", palette::wall_black);
  s.circle(600, 920, 35, palette::badge_red);
  s.line({586, 906}, {614, 934}, palette::background_white, 8);
  s.line({586, 934}, {614, 906}, palette::background_white, 8);
  s.text(710, 920, 44, "DIFF", palette::wall_black);
  return s;
}

}  // namespace tacit::graph

namespace tacit::tasks {

PuzzleInstance generate_coloring(const Params& params, Rng& rng) {
  using namespace tacit::graph;
  const int n = static_cast<int>(params.at("nodes"));
  const int k = static_cast<int>(params.at("k"));
  ColoringSpec spec = build_coloring(n, params.at("density"), k, rng);
  const auto& sol = spec.solution;
  const auto& edges = spec.graph.edges;

  PuzzleInstance inst;
  inst.puzzle = render_coloring(spec, nullptr);
  inst.solution = render_coloring(spec, &sol);
  auto add = [&](std::vector<int> colors, std::string violation, std::string diag, nlohmann::json note) {
    if (judge_coloring(spec, colors).diagnosis() != diag) {
      throw GenerationRetry("graph_coloring: distractor " + violation + " misdiagnosed");
    }
    inst.distractors.push_back({render_coloring(spec, &colors), std::move(violation), std::move(diag), std::move(note)});
  };

  std::vector<std::size_t> eorder(edges.size());
  std::iota(eorder.begin(), eorder.end(), 0);
  rng.shuffle(eorder);
  auto conflict = [&](std::size_t i) {
    auto c = sol;
    const auto [a, b] = edges[eorder[i]];
    c[a] = c[b];
    return std::pair{c, nlohmann::json{{"edge", {a, b}}}};
  };

  auto [c0, n0] = conflict(0);
  add(c0, "adjacent_conflict", "proper", n0);

  if (auto fewer = exact_coloring(spec.graph, k - 1, &rng)) {
    add(*fewer, "missing_color", "exact", {{"basis", "proper_k_minus_1"}});
  } else {
    // Not (k-1)-colorable: merging two classes must create a clash.
    auto c = sol;
    const int from = static_cast<int>(rng.index(k));
    const int to = (from + 1 + static_cast<int>(rng.index(k - 1))) % k;
    for (int& x : c) {
      if (x == from) x = to;
    }
    add(c, "missing_color", "proper", {{"basis", "merge"}, {"merged", {from, to}}});
  }

  // Recolor a node from a class of size >= 2 with the unused color k.
  std::vector<int> movable;
  for (int v = 0; v < n; ++v) {
    if (std::count(sol.begin(), sol.end(), sol[v]) >= 2) movable.push_back(v);
  }
  if (movable.empty()) throw GenerationRetry("graph_coloring: no recolorable node");
  auto extra = sol;
  const int v = rng.pick(movable);
  extra[v] = k;
  add(extra, "wrong_k", "exact", {{"node", v}});

  auto [c3, n3] = conflict(edges.size() > 1 ? 1 : 0);
  n3["repeat"] = true;
  add(c3, "adjacent_conflict", "proper", n3);

  inst.spec = std::make_shared<ColoringTask>(std::move(spec));
  return inst;
}

PuzzleInstance generate_isopair(const Params& params, Rng& rng) {
  using namespace tacit::graph;
  IsoPairSpec spec = build_isopair(static_cast<int>(params.at("nodes")), params.at("distortion"), rng);
  PuzzleInstance inst;
  inst.puzzle = render_isopair(spec);
  badge::add_opposite_distractors(inst, spec.isomorphic);
  inst.spec = std::make_shared<IsoTask>(std::move(spec));
  return inst;
}

}  // namespace tacit::tasks
