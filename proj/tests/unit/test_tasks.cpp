#include <doctest.h>

#include <deque>
#include <map>

#include "tacit/core/registry.hpp"
#include "tacit/scene/raster.hpp"

using namespace tacit;
using nlohmann::json;

TEST_CASE("every task: solution passes, distractors fail as labeled") {
  for (const auto& t : list_tasks()) {
    for (Difficulty d : {Difficulty::easy, Difficulty::hard}) {
      for (std::uint64_t seed : {101u, 202u}) {
        CAPTURE(t.name);
        CAPTURE(to_string(d));
        CAPTURE(seed);
        const auto inst = generate(t.id, d, seed);
        const VerifyOptions opt{512};
        CHECK(verify(inst, rasterize(inst.solution, 512), opt).passed);
        REQUIRE(inst.distractors.size() == 4);
        for (const auto& dis : inst.distractors) {
          CAPTURE(dis.violation);
          const auto r = verify(inst, rasterize(dis.scene, 512), opt);
          CHECK_FALSE(r.passed);
          if (!dis.expected_diagnosis.empty()) CHECK(r.diagnosis() == dis.expected_diagnosis);
          const auto& cat = t.violations;
          CHECK(std::find(cat.begin(), cat.end(), dis.violation) != cat.end());
        }
      }
    }
  }
}

TEST_CASE("a blank canvas is rejected by every verifier") {
  const RasterImage blank(512, 512, {255, 255, 255});
  for (const auto& t : list_tasks()) {
    CAPTURE(t.name);
    const auto inst = generate(t.id, Difficulty::easy, 9);
    CHECK_FALSE(verify(inst, blank).passed);
  }
}

namespace {

using Cell = std::array<int, 3>;  // layer, row, col

// Moves allowed by the wall bits (N=1, E=2, S=4, W=8) and portals.
std::vector<Cell> moves(const json& m, const Cell& c) {
  const int n = m["grid"], layers = m["layers"];
  const int bits = m["walls"][c[0]][c[1] * n + c[2]];
  std::vector<Cell> out;
  if (!(bits & 1)) out.push_back({c[0], c[1] - 1, c[2]});
  if (!(bits & 2)) out.push_back({c[0], c[1], c[2] + 1});
  if (!(bits & 4)) out.push_back({c[0], c[1] + 1, c[2]});
  if (!(bits & 8)) out.push_back({c[0], c[1], c[2] - 1});
  for (const auto& p : m["portals"]) {
    if (p["row"] != c[1] || p["col"] != c[2]) continue;
    if (p["layer"] == c[0] && c[0] + 1 < layers) out.push_back({c[0] + 1, c[1], c[2]});
    if (p["layer"] == c[0] - 1) out.push_back({c[0] - 1, c[1], c[2]});
  }
  return out;
}

std::map<Cell, int> bfs(const json& m, const Cell& from) {
  std::map<Cell, int> dist{{from, 0}};
  std::deque<Cell> q{from};
  while (!q.empty()) {
    const Cell c = q.front();
    q.pop_front();
    for (const Cell& nb : moves(m, c)) {
      if (dist.emplace(nb, dist[c] + 1).second) q.push_back(nb);
    }
  }
  return dist;
}

}  // namespace

TEST_CASE("maze: closed boundary, symmetric walls, BFS-shortest solution") {
  for (Difficulty d : kDifficulties) {
    for (std::uint64_t seed = 1; seed <= 4; ++seed) {
      const json m = generate(1, d, seed).spec->structure();
      const int n = m["grid"], layers = m["layers"];
      for (int l = 0; l < layers; ++l) {
        for (int r = 0; r < n; ++r) {
          for (int c = 0; c < n; ++c) {
            const int b = m["walls"][l][r * n + c];
            if (r == 0) CHECK((b & 1));
            if (c == n - 1) CHECK((b & 2));
            if (r == n - 1) CHECK((b & 4));
            if (c == 0) CHECK((b & 8));
            if (c + 1 < n) CHECK(bool(b & 2) == bool(int(m["walls"][l][r * n + c + 1]) & 8));
            if (r + 1 < n) CHECK(bool(b & 4) == bool(int(m["walls"][l][(r + 1) * n + c]) & 1));
          }
        }
      }
      const Cell start = m["start"], end = m["end"];
      const auto dist = bfs(m, start);
      CHECK(dist.size() == static_cast<std::size_t>(n * n * layers));  // every cell reachable
      const auto& path = m["solution"];
      REQUIRE(path.size() == static_cast<std::size_t>(dist.at(end) + 1));
      CHECK(path.front() == start);
      CHECK(path.back() == end);
      for (std::size_t i = 1; i < path.size(); ++i) {
        const auto nb = moves(m, path[i - 1].get<Cell>());
        CHECK(std::find(nb.begin(), nb.end(), path[i].get<Cell>()) != nb.end());
      }
      CHECK(m["portals"].size() == static_cast<std::size_t>(layers > 1 ? generate(1, d, seed).params.at("portals") : 0));
    }
  }
}
