#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "tacit/core/rng.hpp"
#include "tacit/core/types.hpp"

namespace tacit::graph {

using Edge = std::pair<int, int>;  // first < second

struct Graph {
  int n = 0;
  std::vector<Edge> edges;

  Graph() = default;
  Graph(int nodes, std::vector<Edge> e);

  bool has_edge(int a, int b) const { return (adj[a] >> b) & 1u; }
  int degree(int v) const;
  bool connected() const;

  std::vector<std::uint32_t> adj;  // bitmask rows
};

// Bowyer-Watson; returns the (sorted, deduplicated) Delaunay edges.
std::vector<Edge> delaunay(const std::vector<Point>& pts);

// ---- coloring ----------------------------------------------------------

struct ColoringSpec {
  Graph graph;
  std::vector<Point> pos;
  double radius = 0;
  int k = 0;
  std::vector<int> solution;  // node -> color index 0..k-1
};

// Proper coloring using exactly `k` distinct colors, or nullopt.
std::optional<std::vector<int>> exact_coloring(const Graph& g, int k, Rng* rng = nullptr);

ColoringSpec build_coloring(int n, double density, int k, Rng& rng);

// Per-node color read from an image: palette::node index, or -1 when the
// node reads as uncolored / unknown.
std::vector<int> read_node_colors(const RasterImage& image, const ColoringSpec& spec);

// completeness -> proper -> exact; details list every failed check.
VerificationResult judge_coloring(const ColoringSpec& spec, const std::vector<int>& colors);

Scene render_coloring(const ColoringSpec& spec, const std::vector<int>* colors);

// ---- isomorphism ---------------------------------------------------------

// Exact test (color refinement + backtracking); returns a mapping
// a -> b with b.has_edge(m[u], m[v]) iff a.has_edge(u, v).
std::optional<std::vector<int>> find_isomorphism(const Graph& a, const Graph& b);

std::vector<Point> spring_layout(const Graph& g, Rng& rng, int iterations = 300);

struct IsoPairSpec {
  Graph g1, g2;
  std::vector<Point> pos1, pos2;  // scene units
  bool isomorphic = false;
  std::vector<int> witness;  // g1 -> g2 when isomorphic
};

IsoPairSpec build_isopair(int n, double distortion, Rng& rng);

Scene render_isopair(const IsoPairSpec& spec);

}  // namespace tacit::graph
