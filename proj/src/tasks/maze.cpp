#include "tacit/tasks/maze.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <map>
#include <queue>
#include <string>

#include "tacit/core/errors.hpp"
#include "tacit/scene/palette.hpp"
#include "tacit/tasks/generators.hpp"

namespace tacit::maze {

namespace {

constexpr int kDr[4] = {-1, 0, 1, 0};
constexpr int kDc[4] = {0, 1, 0, -1};
constexpr std::uint8_t kBit[4] = {kNorth, kEast, kSouth, kWest};
constexpr std::uint8_t kOpposite[4] = {kSouth, kWest, kNorth, kEast};

constexpr double kMargin = 30.0;
constexpr double kLabelBand = 40.0;
constexpr double kWallWidth = 0.1;    // cells
constexpr double kPathWidth = 0.4;    // cells
constexpr double kPortalRadius = 0.3; // cells
constexpr double kEndpointRadius = 0.35;

nlohmann::json cell_json(const Cell& c) { return nlohmann::json::array({c.layer, c.row, c.col}); }

std::vector<std::vector<Cell>> split_runs(const std::vector<Cell>& path) {
  std::vector<std::vector<Cell>> runs;
  for (const Cell& c : path) {
    if (runs.empty() || runs.back().back().layer != c.layer) runs.emplace_back();
    runs.back().push_back(c);
  }
  return runs;
}

std::set<Cell> cell_set(const std::vector<std::vector<Cell>>& runs) {
  std::set<Cell> s;
  for (const auto& r : runs) s.insert(r.begin(), r.end());
  return s;
}

int panel_cols(int layers) { return layers <= 4 ? layers : (layers + 1) / 2; }

class MazeTask final : public TaskSpec {
 public:
  explicit MazeTask(MazeSpec spec) : spec_(std::move(spec)), geometry_(layout(spec_)) {}

  VerificationResult verify(const RasterImage& candidate, const VerifyOptions&) const override {
    const auto cells = vision::extract_path_cells(candidate, geometry_);
    return diagnose(spec_, std::set<Cell>(cells.begin(), cells.end()));
  }

  nlohmann::json structure() const override { return to_json(spec_); }

  nlohmann::json geometry() const override {
    nlohmann::json layers = nlohmann::json::array();
    for (const auto& g : geometry_) layers.push_back(g);
    return {{"layers", layers}};
  }

 private:
  MazeSpec spec_;
  std::vector<vision::GridGeometry> geometry_;
};

}  // namespace

std::optional<int> MazeSpec::portal_at(int lower_layer, int row, int col) const {
  for (std::size_t i = 0; i < portals.size(); ++i) {
    const Portal& p = portals[i];
    if (p.layer == lower_layer && p.row == row && p.col == col) return static_cast<int>(i);
  }
  return std::nullopt;
}

std::vector<Cell> MazeSpec::neighbors(const Cell& c) const {
  std::vector<Cell> out;
  for (int d = 0; d < 4; ++d) {
    if (!wall(c, kBit[d])) out.push_back({c.layer, c.row + kDr[d], c.col + kDc[d]});
  }
  if (c.layer + 1 < layers && portal_at(c.layer, c.row, c.col)) out.push_back({c.layer + 1, c.row, c.col});
  if (c.layer > 0 && portal_at(c.layer - 1, c.row, c.col)) out.push_back({c.layer - 1, c.row, c.col});
  return out;
}

std::vector<Cell> solve(const MazeSpec& spec, const Cell& from, const Cell& to, const std::set<Cell>& blocked) {
  std::map<Cell, Cell> parent;
  std::deque<Cell> queue{from};
  parent[from] = from;
  while (!queue.empty()) {
    const Cell c = queue.front();
    queue.pop_front();
    if (c == to) break;
    for (const Cell& nb : spec.neighbors(c)) {
      if (blocked.contains(nb) || parent.contains(nb)) continue;
      parent[nb] = c;
      queue.push_back(nb);
    }
  }
  if (!parent.contains(to)) return {};
  std::vector<Cell> path{to};
  while (path.back() != from) path.push_back(parent[path.back()]);
  std::reverse(path.begin(), path.end());
  return path;
}

VerificationResult diagnose(const MazeSpec& spec, const std::set<Cell>& blue) {
  nlohmann::json d = {{"path_cells", blue.size()}};
  if (blue.empty()) {
    d["check"] = 0;
    d["diagnosis"] = "no_path";
    return VerificationResult::fail("no path detected", d);
  }
  if (!blue.contains(spec.start)) {
    d["check"] = 1;
    d["diagnosis"] = "wrong_start";
    d["cell"] = cell_json(spec.start);
    return VerificationResult::fail("path does not begin at the start cell", d);
  }
  if (!blue.contains(spec.end)) {
    d["check"] = 2;
    d["diagnosis"] = "wrong_end";
    d["cell"] = cell_json(spec.end);
    return VerificationResult::fail("path does not reach the end cell", d);
  }

  // Cheapest route through blue cells using geometric moves; moves the maze
  // forbids cost a large penalty, so the route uses as few as possible.
  constexpr long long kIllegal = 1'000'000;
  std::map<Cell, long long> dist;
  std::map<Cell, Cell> parent;
  using Entry = std::pair<long long, Cell>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> pq;
  dist[spec.start] = 0;
  pq.push({0, spec.start});
  auto relax = [&](const Cell& from, const Cell& to, long long w) {
    if (!blue.contains(to)) return;
    const long long nd = dist[from] + w;
    auto it = dist.find(to);
    if (it == dist.end() || nd < it->second) {
      dist[to] = nd;
      parent[to] = from;
      pq.push({nd, to});
    }
  };
  while (!pq.empty()) {
    auto [du, u] = pq.top();
    pq.pop();
    if (du != dist[u]) continue;
    if (u == spec.end) break;
    for (int dir = 0; dir < 4; ++dir) {
      const Cell v{u.layer, u.row + kDr[dir], u.col + kDc[dir]};
      if (v.row < 0 || v.row >= spec.n || v.col < 0 || v.col >= spec.n) continue;
      relax(u, v, spec.wall(u, kBit[dir]) ? kIllegal : 1);
    }
    for (int dl : {-1, 1}) {
      const Cell v{u.layer + dl, u.row, u.col};
      if (v.layer < 0 || v.layer >= spec.layers) continue;
      const int lower = std::min(u.layer, v.layer);
      relax(u, v, spec.portal_at(lower, u.row, u.col) ? 1 : kIllegal);
    }
  }

  if (!dist.contains(spec.end)) {
    d["check"] = 4;
    d["diagnosis"] = "gap";
    // The blue cell reachable from start that lies nearest the end.
    Cell frontier = spec.start;
    int best = std::numeric_limits<int>::max();
    for (const auto& [c, _] : dist) {
      const int m = std::abs(c.row - spec.end.row) + std::abs(c.col - spec.end.col) +
                    spec.n * std::abs(c.layer - spec.end.layer);
      if (m < best) best = m, frontier = c;
    }
    d["cell"] = cell_json(frontier);
    return VerificationResult::fail("path is not connected from start to end", d);
  }

  std::vector<Cell> route{spec.end};
  while (route.back() != spec.start) route.push_back(parent[route.back()]);
  std::reverse(route.begin(), route.end());
  d["route_length"] = route.size();
  for (std::size_t i = 1; i < route.size(); ++i) {
    const Cell& a = route[i - 1];
    const Cell& b = route[i];
    if (a.layer == b.layer) {
      int dir = 0;
      while (a.row + kDr[dir] != b.row || a.col + kDc[dir] != b.col) ++dir;
      if (spec.wall(a, kBit[dir])) {
        d["check"] = 3;
        d["diagnosis"] = "wall_crossing";
        d["cell"] = cell_json(b);
        d["from"] = cell_json(a);
        return VerificationResult::fail("path passes through a wall", d);
      }
    } else if (!spec.portal_at(std::min(a.layer, b.layer), a.row, a.col)) {
      d["check"] = 4;
      d["diagnosis"] = "missing_portal";
      d["cell"] = cell_json(b);
      d["from"] = cell_json(a);
      return VerificationResult::fail("path changes layer without a portal", d);
    }
  }
  return VerificationResult::ok(d);
}

std::vector<vision::GridGeometry> layout(const MazeSpec& spec) {
  const int pc = panel_cols(spec.layers);
  const int pr = (spec.layers + pc - 1) / pc;
  const double avail = kCanvasUnits - 2 * kMargin;
  const double cell = std::min(avail / (pc * spec.n + (pc - 1)), (avail - pr * kLabelBand) / (pr * spec.n + (pr - 1)));
  const double block_w = cell * (pc * spec.n + (pc - 1));
  const double block_h = cell * (pr * spec.n + (pr - 1)) + pr * kLabelBand;
  const double ox = (kCanvasUnits - block_w) / 2;
  const double oy = (kCanvasUnits - block_h) / 2;
  std::vector<vision::GridGeometry> out;
  for (int l = 0; l < spec.layers; ++l) {
    const int px = l % pc, py = l / pc;
    vision::GridGeometry g;
    g.x0 = ox + px * cell * (spec.n + 1);
    g.y0 = oy + py * (cell * (spec.n + 1) + kLabelBand) + kLabelBand;
    g.cell_w = g.cell_h = cell;
    g.rows = g.cols = spec.n;
    out.push_back(g);
  }
  return out;
}

Scene render_puzzle(const MazeSpec& spec) {
  const auto grids = layout(spec);
  Scene s;
  for (int l = 0; l < spec.layers; ++l) {
    const auto& g = grids[l];
    const double cs = g.cell_w;
    const double ww = std::max(cs * kWallWidth, 1.0);
    const double label = std::min(kLabelBand * 0.6, 30.0);
    s.text(g.x0 + g.cols * cs / 2, g.y0 - kLabelBand / 2, label, std::to_string(l + 1), palette::wall_black);
    // Interior walls as maximal horizontal / vertical runs.
    for (int r = 0; r < spec.n - 1; ++r) {
      int c = 0;
      while (c < spec.n) {
        if (!spec.wall({l, r, c}, kSouth)) { ++c; continue; }
        int e = c;
        while (e < spec.n && spec.wall({l, r, e}, kSouth)) ++e;
        const double y = g.y0 + (r + 1) * cs;
        s.line({g.x0 + c * cs, y}, {g.x0 + e * cs, y}, palette::wall_black, ww);
        c = e;
      }
    }
    for (int c = 0; c < spec.n - 1; ++c) {
      int r = 0;
      while (r < spec.n) {
        if (!spec.wall({l, r, c}, kEast)) { ++r; continue; }
        int e = r;
        while (e < spec.n && spec.wall({l, e, c}, kEast)) ++e;
        const double x = g.x0 + (c + 1) * cs;
        s.line({x, g.y0 + r * cs}, {x, g.y0 + e * cs}, palette::wall_black, ww);
        r = e;
      }
    }
    s.rect(g.x0, g.y0, g.cols * cs, g.rows * cs, std::nullopt, palette::wall_black, ww);
  }
  for (const Portal& p : spec.portals) {
    for (int l : {p.layer, p.layer + 1}) {
      const auto& g = grids[l];
      s.circle(g.center_x(p.col), g.center_y(p.row), kPortalRadius * g.cell_w, palette::portal[p.color]);
    }
  }
  const auto& gs = grids[spec.start.layer];
  s.circle(gs.center_x(spec.start.col), gs.center_y(spec.start.row), kEndpointRadius * gs.cell_w,
           palette::start_green);
  const auto& ge = grids[spec.end.layer];
  s.circle(ge.center_x(spec.end.col), ge.center_y(spec.end.row), kEndpointRadius * ge.cell_w, palette::end_red);
  return s;
}

Scene render_path(const MazeSpec& spec, const std::vector<std::vector<Cell>>& runs) {
  const auto grids = layout(spec);
  Scene s = render_puzzle(spec);
  for (const auto& run : runs) {
    const auto& g = grids[run.front().layer];
    const double w = kPathWidth * g.cell_w;
    if (run.size() == 1) {
      s.circle(g.center_x(run[0].col), g.center_y(run[0].row), w / 2, palette::path_blue);
      continue;
    }
    std::vector<Point> pts;
    for (const Cell& c : run) pts.push_back({g.center_x(c.col), g.center_y(c.row)});
    s.polyline(std::move(pts), palette::path_blue, w);
  }
  return s;
}

MazeSpec build(int n, int layers, int portals, Rng& rng) {
  if (layers == 1 && portals != 0) throw ValidationError("maze: a single layer has no portals");
  if (portals < layers - 1) throw ValidationError("maze: need at least one portal per adjacent layer pair");
  if (2 * portals > layers * n * n - 2) throw ValidationError("maze: too many portals for the grid");

  MazeSpec m;
  m.n = n;
  m.layers = layers;
  m.walls.assign(layers, std::vector<std::uint8_t>(n * n, kNorth | kEast | kSouth | kWest));

  // Randomized depth-first carving, one perfect maze per layer.
  for (int l = 0; l < layers; ++l) {
    auto& w = m.walls[l];
    std::vector<char> seen(n * n, 0);
    const int first = static_cast<int>(rng.index(n * n));
    std::vector<int> stack{first};
    seen[first] = 1;
    while (!stack.empty()) {
      const int cur = stack.back();
      const int r = cur / n, c = cur % n;
      int dirs[4];
      int k = 0;
      for (int d = 0; d < 4; ++d) {
        const int nr = r + kDr[d], nc = c + kDc[d];
        if (nr >= 0 && nr < n && nc >= 0 && nc < n && !seen[nr * n + nc]) dirs[k++] = d;
      }
      if (k == 0) {
        stack.pop_back();
        continue;
      }
      const int d = dirs[rng.index(k)];
      const int nxt = (r + kDr[d]) * n + (c + kDc[d]);
      w[cur] &= ~kBit[d];
      w[nxt] &= ~kOpposite[d];
      seen[nxt] = 1;
      stack.push_back(nxt);
    }
  }

  m.start = {0, static_cast<int>(rng.index(n)), static_cast<int>(rng.index(n))};

  // Each layer pair gets one portal first, the rest go to random pairs.
  std::set<Cell> used{m.start};
  for (int i = 0; i < portals; ++i) {
    const int lower = i < layers - 1 ? i : static_cast<int>(rng.index(layers - 1));
    for (int tries = 0;; ++tries) {
      if (tries > 1000) throw GenerationRetry("maze: no free portal cell");
      const int r = static_cast<int>(rng.index(n)), c = static_cast<int>(rng.index(n));
      if (used.contains({lower, r, c}) || used.contains({lower + 1, r, c})) continue;
      used.insert({lower, r, c});
      used.insert({lower + 1, r, c});
      m.portals.push_back({lower, r, c, i % static_cast<int>(palette::portal.size())});
      break;
    }
  }

  // End: the last-layer cell farthest from start (ties -> row-major first).
  std::map<Cell, int> dist{{m.start, 0}};
  std::deque<Cell> q{m.start};
  while (!q.empty()) {
    const Cell c = q.front();
    q.pop_front();
    for (const Cell& nb : m.neighbors(c)) {
      if (dist.emplace(nb, dist[c] + 1).second) q.push_back(nb);
    }
  }
  int best = -1;
  for (const auto& [c, d] : dist) {
    if (c.layer != layers - 1 || used.contains(c)) continue;
    if (d > best) best = d, m.end = c;
  }
  if (best <= 0) throw GenerationRetry("maze: end unreachable");
  m.solution = solve(m, m.start, m.end);
  return m;
}

nlohmann::json to_json(const MazeSpec& spec) {
  nlohmann::json walls = nlohmann::json::array();
  for (const auto& layer : spec.walls) walls.push_back(layer);
  nlohmann::json portals = nlohmann::json::array();
  for (const Portal& p : spec.portals) {
    portals.push_back({{"layer", p.layer}, {"row", p.row}, {"col", p.col}, {"color", p.color}});
  }
  nlohmann::json path = nlohmann::json::array();
  for (const Cell& c : spec.solution) path.push_back(cell_json(c));
  return {{"grid", spec.n},          {"layers", spec.layers},   {"walls", walls},
          {"start", cell_json(spec.start)}, {"end", cell_json(spec.end)}, {"portals", portals},
          {"solution", path}};
}

}  // namespace tacit::maze

namespace tacit::tasks {

namespace {

using maze::Cell;
using maze::MazeSpec;
using Runs = std::vector<std::vector<Cell>>;

struct Candidate {
  Runs runs;
  nlohmann::json note = nlohmann::json::object();
};

bool diagnosed_as(const MazeSpec& m, const Runs& runs, std::string_view expected) {
  const auto r = maze::diagnose(m, maze::cell_set(runs));
  return !r.passed && r.diagnosis() == expected;
}

Runs runs_of(const std::vector<Cell>& path) { return maze::split_runs(path); }

// Prefix of the solution up to `a`, a step through the wall into `b`, then the
// legal route from `b` to the end.
std::optional<Candidate> wall_breach(const MazeSpec& m, Rng& rng, const std::set<std::pair<Cell, Cell>>& avoid,
                                     std::pair<Cell, Cell>* chosen) {
  std::vector<std::pair<std::size_t, Cell>> options;
  for (std::size_t i = 0; i + 1 < m.solution.size(); ++i) {
    const Cell& a = m.solution[i];
    for (int d = 0; d < 4; ++d) {
      const Cell b{a.layer, a.row + maze::kDr[d], a.col + maze::kDc[d]};
      if (b.row < 0 || b.row >= m.n || b.col < 0 || b.col >= m.n || !m.wall(a, maze::kBit[d])) continue;
      if (avoid.contains({a, b})) continue;
      options.push_back({i, b});
    }
  }
  rng.shuffle(options);
  for (const auto& [i, b] : options) {
    const std::vector<Cell> prefix(m.solution.begin(), m.solution.begin() + static_cast<long>(i) + 1);
    const std::set<Cell> blocked(prefix.begin(), prefix.end());
    auto tail = maze::solve(m, b, m.end, blocked);
    if (tail.empty()) continue;
    std::vector<Cell> path = prefix;
    path.insert(path.end(), tail.begin(), tail.end());
    Runs runs = runs_of(path);
    if (!diagnosed_as(m, runs, "wall_crossing")) continue;
    if (chosen) *chosen = {prefix.back(), b};
    return Candidate{std::move(runs), {{"breach", {{"from", maze::cell_json(prefix.back())}, {"to", maze::cell_json(b)}}}}};
  }
  return std::nullopt;
}

// Leaves layer `i` at a cell without a portal and resumes on layer i+1 there.
std::optional<Candidate> portal_skip(const MazeSpec& m, Rng& rng) {
  std::vector<Cell> options;
  for (int l = 0; l + 1 < m.layers; ++l) {
    for (int r = 0; r < m.n; ++r) {
      for (int c = 0; c < m.n; ++c) {
        if (!m.portal_at(l, r, c)) options.push_back({l, r, c});
      }
    }
  }
  rng.shuffle(options);
  int tried = 0;
  for (const Cell& x : options) {
    if (++tried > 200) break;
    const Cell up{x.layer + 1, x.row, x.col};
    if (x == m.start || up == m.end) continue;
    auto head = maze::solve(m, m.start, x);
    if (head.empty()) continue;
    const std::set<Cell> blocked(head.begin(), head.end());
    auto tail = maze::solve(m, up, m.end, blocked);
    if (tail.empty()) continue;
    head.insert(head.end(), tail.begin(), tail.end());
    Runs runs = runs_of(head);
    if (!diagnosed_as(m, runs, "missing_portal")) continue;
    return Candidate{std::move(runs), {{"jump", maze::cell_json(x)}}};
  }
  return std::nullopt;
}

std::optional<Candidate> disconnected(const MazeSpec& m, Rng& rng) {
  std::vector<std::size_t> options;
  for (std::size_t i = 1; i + 1 < m.solution.size(); ++i) {
    const int l = m.solution[i].layer;
    if (m.solution[i - 1].layer == l && m.solution[i + 1].layer == l) options.push_back(i);
  }
  rng.shuffle(options);
  for (std::size_t i : options) {
    std::vector<Cell> before(m.solution.begin(), m.solution.begin() + static_cast<long>(i));
    std::vector<Cell> after(m.solution.begin() + static_cast<long>(i) + 1, m.solution.end());
    Runs runs = runs_of(before);
    for (auto& r : runs_of(after)) runs.push_back(std::move(r));
    if (!diagnosed_as(m, runs, "gap")) continue;
    return Candidate{std::move(runs), {{"removed", maze::cell_json(m.solution[i])}}};
  }
  return std::nullopt;
}

std::optional<Candidate> wrong_exit(const MazeSpec& m, Rng& rng) {
  // Prefer exits at least a few steps away from the true end.
  const std::set<Cell> blocked{m.end};
  std::vector<Cell> options;
  for (int r = 0; r < m.n; ++r) {
    for (int c = 0; c < m.n; ++c) {
      const Cell x{m.layers - 1, r, c};
      if (x != m.end && std::abs(r - m.end.row) + std::abs(c - m.end.col) >= 2) options.push_back(x);
    }
  }
  rng.shuffle(options);
  int tried = 0;
  for (const Cell& x : options) {
    if (++tried > 200) break;
    auto path = maze::solve(m, m.start, x, blocked);
    if (path.size() < 2) continue;
    Runs runs = runs_of(path);
    if (!diagnosed_as(m, runs, "wrong_end")) continue;
    return Candidate{std::move(runs), {{"exit", maze::cell_json(x)}}};
  }
  return std::nullopt;
}

}  // namespace

PuzzleInstance generate_maze(const Params& params, Rng& rng) {
  const int n = static_cast<int>(params.at("grid"));
  const int layers = static_cast<int>(params.at("layers"));
  const int portals = static_cast<int>(params.at("portals"));
  MazeSpec m = maze::build(n, layers, portals, rng);

  PuzzleInstance inst;
  inst.puzzle = maze::render_puzzle(m);
  inst.solution = maze::render_path(m, runs_of(m.solution));

  auto need = [](std::optional<Candidate> c, const char* what) {
    if (!c) throw GenerationRetry(std::string("maze: cannot build ") + what);
    return std::move(*c);
  };
  auto add = [&](Candidate c, std::string violation, std::string diagnosis) {
    inst.distractors.push_back({maze::render_path(m, c.runs), std::move(violation), std::move(diagnosis), c.note});
  };

  std::pair<Cell, Cell> first_breach;
  add(need(wall_breach(m, rng, {}, &first_breach), "wall_breach"), "wall_breach", "wall_crossing");
  if (layers > 1) {
    add(need(portal_skip(m, rng), "portal_skip"), "portal_skip", "missing_portal");
  } else {
    Candidate c = need(wall_breach(m, rng, {first_breach}, nullptr), "second wall_breach");
    c.note["substitutes"] = "portal_skip";
    c.note["reason"] = "single layer has no portals";
    add(std::move(c), "wall_breach", "wall_crossing");
  }
  add(need(disconnected(m, rng), "disconnected"), "disconnected", "gap");
  add(need(wrong_exit(m, rng), "wrong_exit"), "wrong_exit", "wrong_end");

  inst.spec = std::make_shared<maze::MazeTask>(std::move(m));
  return inst;
}

}  // namespace tacit::tasks
