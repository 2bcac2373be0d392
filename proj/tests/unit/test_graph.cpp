#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <set>

#include "tacit/core/registry.hpp"
#include "tacit/core/rng.hpp"
#include "tacit/tasks/graph.hpp"

using namespace tacit;
using namespace tacit::graph;

namespace {

double cross(Point o, Point a, Point b) { return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x); }

int hull_size(std::vector<Point> p) {
  std::sort(p.begin(), p.end(), [](Point a, Point b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
  std::vector<Point> h(2 * p.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    while (k >= 2 && cross(h[k - 2], h[k - 1], p[i]) <= 0) --k;
    h[k++] = p[i];
  }
  for (std::size_t i = p.size() - 1, t = k + 1; i-- > 0;) {
    while (k >= t && cross(h[k - 2], h[k - 1], p[i]) <= 0) --k;
    h[k++] = p[i];
  }
  return static_cast<int>(k) - 1;
}

bool proper_crossing(Point a, Point b, Point c, Point d) {
  const double d1 = cross(a, b, c), d2 = cross(a, b, d), d3 = cross(c, d, a), d4 = cross(c, d, b);
  return ((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0)) && d1 != 0 && d2 != 0 && d3 != 0 && d4 != 0;
}

Graph random_graph(int n, double p, Rng& rng) {
  std::vector<Edge> e;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      if (rng.bernoulli(p)) e.push_back({a, b});
  return Graph(n, e);
}

// Is there a proper coloring using exactly k colors? Enumerates k^n.
bool brute_exact_colorable(const Graph& g, int k) {
  std::vector<int> col(g.n, 0);
  while (true) {
    bool ok = true;
    for (const auto& [a, b] : g.edges) ok = ok && col[a] != col[b];
    if (ok && static_cast<int>(std::set<int>(col.begin(), col.end()).size()) == k) return true;
    int i = 0;
    while (i < g.n && ++col[i] == k) col[i++] = 0;
    if (i == g.n) return false;
  }
}

bool brute_isomorphic(const Graph& a, const Graph& b) {
  if (a.n != b.n || a.edges.size() != b.edges.size()) return false;
  std::vector<int> p(a.n);
  std::iota(p.begin(), p.end(), 0);
  do {
    bool ok = true;
    for (const auto& [u, v] : a.edges) ok = ok && b.has_edge(p[u], p[v]);
    if (ok) return true;
  } while (std::next_permutation(p.begin(), p.end()));
  return false;
}

bool is_witness(const Graph& a, const Graph& b, const std::vector<int>& m) {
  if (std::set<int>(m.begin(), m.end()).size() != static_cast<std::size_t>(a.n)) return false;
  for (int u = 0; u < a.n; ++u)
    for (int v = u + 1; v < a.n; ++v)
      if (a.has_edge(u, v) != b.has_edge(m[u], m[v])) return false;
  return true;
}

Graph from_json(const nlohmann::json& j) {
  std::vector<Edge> e;
  for (const auto& x : j["edges"]) e.push_back({x[0], x[1]});
  return Graph(j["n"], e);
}

}  // namespace

TEST_CASE("Delaunay: planar with 3n - 3 - h edges") {
  Rng rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = rng.uniform_int(5, 40);
    std::vector<Point> pts;
    for (int i = 0; i < n; ++i) pts.push_back({rng.uniform(0, 1000), rng.uniform(0, 1000)});
    const auto edges = delaunay(pts);
    CHECK(static_cast<int>(edges.size()) == 3 * n - 3 - hull_size(pts));
    for (std::size_t i = 0; i < edges.size(); ++i) {
      CHECK(edges[i].first < edges[i].second);
      for (std::size_t j = i + 1; j < edges.size(); ++j) {
        CHECK_FALSE(proper_crossing(pts[edges[i].first], pts[edges[i].second], pts[edges[j].first], pts[edges[j].second]));
      }
    }
  }
}

TEST_CASE("exact_coloring agrees with exhaustive search") {
  Rng rng(3);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = rng.uniform_int(3, 7), k = rng.uniform_int(2, 4);
    const Graph g = random_graph(n, rng.uniform(0.2, 0.8), rng);
    const auto col = exact_coloring(g, k);
    CHECK(col.has_value() == brute_exact_colorable(g, k));
    if (col) {
      for (const auto& [a, b] : g.edges) CHECK((*col)[a] != (*col)[b]);
      CHECK(static_cast<int>(std::set<int>(col->begin(), col->end()).size()) == k);
    }
  }
}

TEST_CASE("generated colorings are proper with exactly k colors") {
  for (Difficulty d : kDifficulties) {
    for (std::uint64_t seed = 1; seed <= 4; ++seed) {
      const auto s = generate(6, d, seed).spec->structure();
      const Graph g = from_json(s);
      CHECK(g.connected());
      const auto sol = s["solution"].get<std::vector<int>>();
      for (const auto& [a, b] : g.edges) CHECK(sol[a] != sol[b]);
      CHECK(static_cast<int>(std::set<int>(sol.begin(), sol.end()).size()) == s["k"].get<int>());
    }
  }
}

TEST_CASE("find_isomorphism agrees with permutation search") {
  Rng rng(8);
  for (int trial = 0; trial < 80; ++trial) {
    const int n = rng.uniform_int(3, 7);
    const Graph a = random_graph(n, 0.45, rng);
    Graph b;
    if (rng.bernoulli(0.5)) {
      std::vector<int> p(n);
      std::iota(p.begin(), p.end(), 0);
      rng.shuffle(p);
      std::vector<Edge> e;
      for (const auto& [u, v] : a.edges) e.push_back({std::min(p[u], p[v]), std::max(p[u], p[v])});
      std::sort(e.begin(), e.end());
      b = Graph(n, e);
    } else {
      b = random_graph(n, 0.45, rng);
    }
    const auto m = find_isomorphism(a, b);
    CHECK(m.has_value() == brute_isomorphic(a, b));
    if (m) CHECK(is_witness(a, b, *m));
  }
}

TEST_CASE("generated isomorphism pairs carry correct ground truth") {
  for (Difficulty d : {Difficulty::easy, Difficulty::medium}) {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      const auto inst = generate(7, d, seed);
      const auto s = inst.spec->structure();
      const Graph a = from_json(s["g1"]), b = from_json(s["g2"]);
      CHECK(inst.spec->binary_answer() == s["isomorphic"].get<bool>());
      CHECK(a.edges.size() == b.edges.size());  // never decidable by edge count
      if (s["isomorphic"]) {
        CHECK(is_witness(a, b, s["witness"].get<std::vector<int>>()));
      } else {
        CHECK_FALSE(brute_isomorphic(a, b));
      }
    }
  }
}
