#include "tacit/tasks/cellular.hpp"

#include <algorithm>
#include <string>

#include "tacit/core/errors.hpp"
#include "tacit/scene/palette.hpp"
#include "tacit/tasks/generators.hpp"

namespace tacit::ca {

namespace {

constexpr double kGridLine = 0.06;  // cells

vision::GridGeometry square_geometry(double x0, double y0, double size, int n) {
  return {x0, y0, size / n, size / n, n, n};
}

// Header band and body of a rule table drawn in a size x size box.
vision::GridGeometry table_body(double x0, double y0, double size, int states) {
  const double h = size / (states + 1);
  return {x0 + h, y0 + h, h, h, states, states};
}

void draw_cells(Scene& s, const std::vector<std::uint8_t>& cells, const vision::GridGeometry& g) {
  for (int r = 0; r < g.rows; ++r) {
    int c = 0;
    while (c < g.cols) {
      const int v = cells[r * g.cols + c];
      int e = c;
      while (e < g.cols && cells[r * g.cols + e] == v) ++e;
      s.rect(g.x0 + c * g.cell_w, g.y0 + r * g.cell_h, (e - c) * g.cell_w, g.cell_h, palette::state[v]);
      c = e;
    }
  }
  const double w = std::max(g.cell_w * kGridLine, 0.8);
  for (int i = 1; i < g.rows; ++i) {
    s.line({g.x0, g.y0 + i * g.cell_h}, {g.x0 + g.cols * g.cell_w, g.y0 + i * g.cell_h}, palette::neutral_gray, w);
  }
  for (int i = 1; i < g.cols; ++i) {
    s.line({g.x0 + i * g.cell_w, g.y0}, {g.x0 + i * g.cell_w, g.y0 + g.rows * g.cell_h}, palette::neutral_gray, w);
  }
  s.rect(g.x0, g.y0, g.cols * g.cell_w, g.rows * g.cell_h, std::nullopt, palette::wall_black, 2 * w);
}

void draw_grid(Scene& s, const Grid& grid, double x0, double y0, double size) {
  draw_cells(s, grid.cells, square_geometry(x0, y0, size, grid.n));
}

void draw_table(Scene& s, const Rule& rule, double x0, double y0, double size) {
  const auto body = table_body(x0, y0, size, rule.states);
  const double h = body.cell_w;
  for (int i = 0; i < rule.states; ++i) {
    // Column header: neighbour sum mod S. Row header: current-state swatch.
    s.text(body.center_x(i), y0 + h / 2, h * 0.5, std::to_string(i), palette::wall_black);
    const double inset = h * 0.18;
    s.rect(x0 + inset, body.y0 + i * h + inset, h - 2 * inset, h - 2 * inset, palette::state[i], palette::wall_black,
           std::max(h * 0.05, 0.8));
  }
  draw_cells(s, rule.table, body);
}

void draw_arrow(Scene& s, double x0, double x1, double y, int label) {
  const double head = (x1 - x0) * 0.3;
  s.line({x0, y}, {x1, y}, palette::wall_black, 5);
  s.polyline({{x1 - head, y - head}, {x1, y}, {x1 - head, y + head}}, palette::wall_black, 5);
  s.text((x0 + x1) / 2, y - 50, 50, std::to_string(label), palette::wall_black);
}

Grid random_grid(int n, int states, Rng& rng) {
  Grid g{n, std::vector<std::uint8_t>(static_cast<std::size_t>(n) * n)};
  for (auto& v : g.cells) v = static_cast<std::uint8_t>(rng.index(states));
  return g;
}

Rule random_rule(int states, Rng& rng) {
  Rule r{states, std::vector<std::uint8_t>(static_cast<std::size_t>(states) * states)};
  for (auto& v : r.table) v = static_cast<std::uint8_t>(rng.index(states));
  return r;
}

vision::ClassMatrix to_matrix(const std::vector<std::uint8_t>& cells, int n) {
  vision::ClassMatrix m(n, std::vector<int>(n));
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) m[r][c] = cells[r * n + c];
  }
  return m;
}

// Flattens a sampled matrix; false if any cell is unreadable or the shape is wrong.
bool flatten(const vision::ClassMatrix& m, int n, std::vector<std::uint8_t>& out, nlohmann::json& where) {
  out.assign(static_cast<std::size_t>(n) * n, 0);
  if (static_cast<int>(m.size()) != n) return false;
  for (int r = 0; r < n; ++r) {
    if (static_cast<int>(m[r].size()) != n) return false;
    for (int c = 0; c < n; ++c) {
      if (m[r][c] < 0) {
        where = {r, c};
        return false;
      }
      out[r * n + c] = static_cast<std::uint8_t>(m[r][c]);
    }
  }
  return true;
}

nlohmann::json first_mismatch(const std::vector<std::uint8_t>& a, const std::vector<std::uint8_t>& b, int n) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] != b[i]) return {static_cast<int>(i) / n, static_cast<int>(i) % n};
  }
  return nullptr;
}

nlohmann::json grid_json(const Grid& g) { return {{"n", g.n}, {"cells", g.cells}}; }
nlohmann::json rule_json(const Rule& r) { return {{"states", r.states}, {"table", r.table}}; }

class ForwardTask final : public TaskSpec {
 public:
  explicit ForwardTask(ForwardSpec spec) : spec_(std::move(spec)) {}

  VerificationResult verify(const RasterImage& candidate, const VerifyOptions&) const override {
    const auto m = vision::sample_grid(candidate, answer_grid_geometry(spec_.initial.n), state_classes(spec_.rule.states),
                                       vision::SampleMode::center_patch_majority);
    return judge_forward(spec_, m);
  }
  nlohmann::json structure() const override {
    return {{"initial", grid_json(spec_.initial)}, {"rule", rule_json(spec_.rule)}, {"steps", spec_.steps},
            {"final", grid_json(spec_.final)}};
  }
  nlohmann::json geometry() const override { return {{"grid", answer_grid_geometry(spec_.initial.n)}}; }

 private:
  ForwardSpec spec_;
};

class InverseTask final : public TaskSpec {
 public:
  explicit InverseTask(InverseSpec spec) : spec_(std::move(spec)) {}

  VerificationResult verify(const RasterImage& candidate, const VerifyOptions&) const override {
    const auto m = vision::sample_grid(candidate, answer_table_geometry(spec_.rule.states),
                                       state_classes(spec_.rule.states), vision::SampleMode::center_patch_majority);
    return judge_inverse(spec_, m);
  }
  nlohmann::json structure() const override {
    return {{"initial", grid_json(spec_.initial)}, {"rule", rule_json(spec_.rule)}, {"steps", spec_.steps},
            {"final", grid_json(spec_.final)}};
  }
  nlohmann::json geometry() const override { return {{"table", answer_table_geometry(spec_.rule.states)}}; }

 private:
  InverseSpec spec_;
};

}  // namespace

Grid step(const Grid& g, const Rule& rule, Exec exec) {
  const int n = g.n, s = rule.states;
  Grid out{n, std::vector<std::uint8_t>(g.cells.size())};
  const bool parallel = exec == Exec::parallel;
#pragma omp parallel for schedule(static) if (parallel)
  for (int r = 0; r < n; ++r) {
    const std::uint8_t* up = g.cells.data() + static_cast<std::size_t>((r + n - 1) % n) * n;
    const std::uint8_t* mid = g.cells.data() + static_cast<std::size_t>(r) * n;
    const std::uint8_t* down = g.cells.data() + static_cast<std::size_t>((r + 1) % n) * n;
    for (int c = 0; c < n; ++c) {
      const int l = c == 0 ? n - 1 : c - 1;
      const int rt = c == n - 1 ? 0 : c + 1;
      const int sum = up[l] + up[c] + up[rt] + mid[l] + mid[rt] + down[l] + down[c] + down[rt];
      out.cells[static_cast<std::size_t>(r) * n + c] = rule.table[mid[c] * s + sum % s];
    }
  }
  return out;
}

Grid simulate(const Grid& g, const Rule& rule, int steps, Exec exec) {
  Grid cur = g;
  for (int i = 0; i < steps; ++i) cur = step(cur, rule, exec);
  return cur;
}

Grid reference::simulate(const Grid& g, const Rule& rule, int steps) {
  Grid cur = g;
  const int n = g.n;
  for (int t = 0; t < steps; ++t) {
    Grid next = cur;
    for (int r = 0; r < n; ++r) {
      for (int c = 0; c < n; ++c) {
        int sum = 0;
        for (int dr = -1; dr <= 1; ++dr) {
          for (int dc = -1; dc <= 1; ++dc) {
            if (dr == 0 && dc == 0) continue;
            sum += cur.at(((r + dr) % n + n) % n, ((c + dc) % n + n) % n);
          }
        }
        next.cells[r * n + c] = static_cast<std::uint8_t>(rule.at(cur.at(r, c), sum % rule.states));
      }
    }
    cur = std::move(next);
  }
  return cur;
}

std::vector<bool> coverage(const Grid& g, const Rule& rule, int steps) {
  const int n = g.n, s = rule.states;
  std::vector<bool> seen(static_cast<std::size_t>(s) * s, false);
  Grid cur = g;
  for (int t = 0; t < steps; ++t) {
    for (int r = 0; r < n; ++r) {
      for (int c = 0; c < n; ++c) {
        int sum = 0;
        for (int dr = -1; dr <= 1; ++dr) {
          for (int dc = -1; dc <= 1; ++dc) {
            if (dr || dc) sum += cur.at((r + dr + n) % n, (c + dc + n) % n);
          }
        }
        seen[cur.at(r, c) * s + sum % s] = true;
      }
    }
    cur = step(cur, rule, Exec::serial);
  }
  return seen;
}

int count_diffs(const std::vector<std::uint8_t>& a, const std::vector<std::uint8_t>& b) {
  int d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) d += a[i] != b[i];
  return d;
}

vision::ClassSet state_classes(int states) {
  vision::ClassSet set;
  for (int i = 0; i < states; ++i) set.classes.push_back({i, palette::state[i], false});
  return set;
}

vision::GridGeometry answer_grid_geometry(int n) { return square_geometry(50, 50, 900, n); }

vision::GridGeometry answer_table_geometry(int states) { return table_body(50, 50, 900, states); }

Scene render_grid_answer(const Grid& g) {
  Scene s;
  draw_grid(s, g, 50, 50, 900);
  return s;
}

Scene render_table_answer(const Rule& rule) {
  Scene s;
  draw_table(s, rule, 50, 50, 900);
  return s;
}

Scene render_forward_puzzle(const ForwardSpec& spec) {
  Scene s;
  draw_grid(s, spec.initial, 30, 290, 420);
  draw_arrow(s, 465, 535, 500, spec.steps);
  draw_table(s, spec.rule, 550, 270, 440);
  return s;
}

Scene render_inverse_puzzle(const InverseSpec& spec) {
  Scene s;
  draw_grid(s, spec.initial, 30, 290, 420);
  draw_arrow(s, 465, 535, 500, spec.steps);
  draw_grid(s, spec.final, 550, 290, 420);
  return s;
}

VerificationResult judge_forward(const ForwardSpec& spec, const vision::ClassMatrix& sampled) {
  const int n = spec.initial.n;
  std::vector<std::uint8_t> cand;
  nlohmann::json where;
  if (!flatten(sampled, n, cand, where)) {
    return VerificationResult::fail("unreadable grid", {{"diagnosis", "unreadable"}, {"cell", where}});
  }
  const int diffs = count_diffs(cand, spec.final.cells);
  nlohmann::json d = {{"diff_cells", diffs}, {"total_cells", n * n}};
  if (diffs == 0) return VerificationResult::ok(d);
  d["first_mismatch"] = first_mismatch(cand, spec.final.cells, n);

  // What the wrong grid is consistent with: another step count, a rule with
  // one changed entry, or neither (individual cells).
  Grid cur = spec.initial;
  for (int j = 0; j <= 2 * spec.steps + 1; ++j) {
    if (j != spec.steps && cur.cells == cand) {
      d["diagnosis"] = "step_count";
      d["matches_steps"] = j;
      return VerificationResult::fail("grid matches a different step count", d);
    }
    cur = step(cur, spec.rule, Exec::serial);
  }
  const int s = spec.rule.states;
  for (int e = 0; e < s * s; ++e) {
    for (int v = 0; v < s; ++v) {
      if (v == spec.rule.table[e]) continue;
      Rule alt = spec.rule;
      alt.table[e] = static_cast<std::uint8_t>(v);
      if (simulate(spec.initial, alt, spec.steps, Exec::serial).cells == cand) {
        d["diagnosis"] = "rule";
        d["rule_entry"] = {e / s, e % s};
        return VerificationResult::fail("grid follows a different rule entry", d);
      }
    }
  }
  d["diagnosis"] = "cell";
  return VerificationResult::fail("grid cells differ", d);
}

VerificationResult judge_inverse(const InverseSpec& spec, const vision::ClassMatrix& sampled) {
  const int s = spec.rule.states;
  std::vector<std::uint8_t> cand;
  nlohmann::json where;
  if (!flatten(sampled, s, cand, where)) {
    return VerificationResult::fail("unreadable rule table", {{"diagnosis", "unreadable"}, {"entry", where}});
  }
  const int diffs = count_diffs(cand, spec.rule.table);
  nlohmann::json d = {{"diff_entries", diffs}, {"total_entries", s * s}};
  if (diffs == 0) return VerificationResult::ok(d);
  d["first_mismatch"] = first_mismatch(cand, spec.rule.table, s);

  std::vector<std::uint8_t> transposed(cand.size());
  for (int r = 0; r < s; ++r) {
    for (int c = 0; c < s; ++c) transposed[c * s + r] = spec.rule.table[r * s + c];
  }
  std::vector<int> rows;
  for (int i = 0; i < s * s; ++i) {
    if (cand[i] != spec.rule.table[i] && (rows.empty() || rows.back() != i / s)) rows.push_back(i / s);
  }
  if (cand == transposed) d["diagnosis"] = "transposed";
  else if (diffs == 1) d["diagnosis"] = "single_entry";
  else if (rows.size() == 1) d["diagnosis"] = "row", d["row"] = rows[0];
  else d["diagnosis"] = "entries";
  return VerificationResult::fail("rule table entries differ", d);
}

}  // namespace tacit::ca

namespace tacit::tasks {

namespace {

using namespace tacit::ca;

template <class Judge, class Make>
std::vector<std::uint8_t> pick_variant(Judge judge, Make make, const std::string& expected, int n, Rng& rng,
                                       const std::vector<std::vector<std::uint8_t>>& avoid) {
  for (int tries = 0; tries < 200; ++tries) {
    auto v = make(rng);
    if (std::find(avoid.begin(), avoid.end(), v) != avoid.end()) continue;
    const auto r = judge(to_matrix(v, n));
    if (!r.passed && r.diagnosis() == expected) return v;
  }
  throw GenerationRetry("ca: cannot build '" + expected + "' distractor");
}

}  // namespace

PuzzleInstance generate_ca_forward(const Params& params, Rng& rng) {
  const int n = static_cast<int>(params.at("grid"));
  const int s = static_cast<int>(params.at("states"));
  const int k = static_cast<int>(params.at("steps"));

  ForwardSpec spec;
  for (int tries = 0;; ++tries) {
    if (tries >= 64) throw GenerationRetry("ca_forward: degenerate trajectories");
    spec.rule = random_rule(s, rng);
    spec.initial = random_grid(n, s, rng);
    spec.steps = k;
    // Reject trajectories that stall within k+1 steps or return to the start.
    std::vector<Grid> traj{spec.initial};
    bool ok = true;
    for (int t = 0; t <= k && ok; ++t) {
      traj.push_back(step(traj.back(), spec.rule));
      ok = traj.back() != traj[traj.size() - 2];
    }
    if (!ok || traj[k] == spec.initial) continue;
    spec.final = traj[k];
    break;
  }

  const auto judge = [&](const vision::ClassMatrix& m) { return judge_forward(spec, m); };
  const int cells = n * n;
  auto wrong_cell = [&](Rng& r) {
    auto v = spec.final.cells;
    const std::size_t i = r.index(cells);
    v[i] = static_cast<std::uint8_t>((v[i] + 1 + r.index(s - 1)) % s);
    return v;
  };
  auto wrong_rule = [&](Rng& r) {
    Rule alt = spec.rule;
    const std::size_t e = r.index(alt.table.size());
    alt.table[e] = static_cast<std::uint8_t>((alt.table[e] + 1 + r.index(s - 1)) % s);
    return simulate(spec.initial, alt, k).cells;
  };
  const int other_k = k >= 2 ? k - 1 : k + 1;
  const auto step_grid = simulate(spec.initial, spec.rule, other_k).cells;
  if (judge(to_matrix(step_grid, n)).diagnosis() != "step_count") throw GenerationRetry("ca_forward: step distractor");

  const auto d0 = pick_variant(judge, wrong_cell, "cell", n, rng, {});
  const auto d2 = pick_variant(judge, wrong_rule, "rule", n, rng, {});
  const auto d3 = pick_variant(judge, wrong_cell, "cell", n, rng, {d0});

  PuzzleInstance inst;
  inst.puzzle = render_forward_puzzle(spec);
  inst.solution = render_grid_answer(spec.final);
  inst.distractors.push_back({render_grid_answer({n, d0}), "wrong_cell", "cell", {}});
  inst.distractors.push_back(
      {render_grid_answer({n, step_grid}), "wrong_step_count", "step_count", {{"steps", other_k}}});
  inst.distractors.push_back({render_grid_answer({n, d2}), "wrong_rule", "rule", {}});
  inst.distractors.push_back({render_grid_answer({n, d3}), "wrong_cell", "cell", {{"repeat", true}}});
  inst.spec = std::make_shared<ForwardTask>(std::move(spec));
  return inst;
}

PuzzleInstance generate_ca_inverse(const Params& params, Rng& rng) {
  const int n = static_cast<int>(params.at("grid"));
  const int s = static_cast<int>(params.at("states"));
  const int k = static_cast<int>(params.at("steps"));

  InverseSpec spec;
  spec.steps = k;
  spec.rule = random_rule(s, rng);
  bool covered = false;
  for (int tries = 0; tries < 64 && !covered; ++tries) {
    spec.initial = random_grid(n, s, rng);
    const auto cov = coverage(spec.initial, spec.rule, k);
    covered = std::all_of(cov.begin(), cov.end(), [](bool b) { return b; });
  }
  if (!covered) throw GenerationRetry("ca_inverse: rule entries not all exercised");
  spec.final = simulate(spec.initial, spec.rule, k);
  if (spec.final == spec.initial) throw GenerationRetry("ca_inverse: final equals initial");

  const auto judge = [&](const vision::ClassMatrix& m) { return judge_inverse(spec, m); };
  auto off_by_one = [&](Rng& r) {
    auto t = spec.rule.table;
    const std::size_t e = r.index(t.size());
    t[e] = static_cast<std::uint8_t>((t[e] + 1) % s);
    return t;
  };
  auto partial = [&](Rng& r) {
    // One row of the table replaced by a different row.
    auto t = spec.rule.table;
    const int row = static_cast<int>(r.index(s));
    const int src = static_cast<int>((row + 1 + r.index(s - 1)) % s);
    std::copy_n(spec.rule.table.begin() + src * s, s, t.begin() + row * s);
    return t;
  };
  std::vector<std::uint8_t> transposed(spec.rule.table.size());
  for (int r = 0; r < s; ++r) {
    for (int c = 0; c < s; ++c) transposed[c * s + r] = spec.rule.table[r * s + c];
  }
  if (judge(to_matrix(transposed, s)).diagnosis() != "transposed") throw GenerationRetry("ca_inverse: symmetric table");

  const auto d0 = pick_variant(judge, off_by_one, "single_entry", s, rng, {});
  const auto d2 = pick_variant(judge, partial, "row", s, rng, {});
  const auto d3 = pick_variant(judge, off_by_one, "single_entry", s, rng, {d0});

  PuzzleInstance inst;
  inst.puzzle = render_inverse_puzzle(spec);
  inst.solution = render_table_answer(spec.rule);
  inst.distractors.push_back({render_table_answer({s, d0}), "off_by_one_rule", "single_entry", {}});
  inst.distractors.push_back({render_table_answer({s, transposed}), "transposed_rule", "transposed", {}});
  inst.distractors.push_back({render_table_answer({s, d2}), "partial_rule", "row", {}});
  inst.distractors.push_back({render_table_answer({s, d3}), "off_by_one_rule", "single_entry", {{"repeat", true}}});
  inst.spec = std::make_shared<InverseTask>(std::move(spec));
  return inst;
}

}  // namespace tacit::tasks
