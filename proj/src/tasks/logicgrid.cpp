#include "tacit/tasks/logicgrid.hpp"

#include <algorithm>
#include <bit>
#include <functional>
#include <string>

#include "tacit/core/errors.hpp"
#include "tacit/scene/palette.hpp"
#include "tacit/tasks/generators.hpp"

namespace tacit::logic {

namespace {

constexpr std::array<ConstraintType, 4> kTypeOrder = {ConstraintType::placement, ConstraintType::exclusion,
                                                      ConstraintType::adjacent_same,
                                                      ConstraintType::adjacent_different};

std::string_view type_name(ConstraintType t) {
  switch (t) {
    case ConstraintType::placement: return "placement";
    case ConstraintType::exclusion: return "exclusion";
    case ConstraintType::adjacent_same: return "adjacent_same";
    case ConstraintType::adjacent_different: return "adjacent_different";
  }
  return "?";
}

std::string col_label(int c) { return std::string(1, static_cast<char>('A' + c)); }
std::string row_label(int r) { return std::to_string(r + 1); }
std::string cell_label(int r, int c) { return col_label(c) + row_label(r); }

class Solver {
 public:
  Solver(int n, const std::vector<Constraint>& constraints, const std::vector<Given>& givens)
      : n_(n), full_((1u << n) - 1), domain_(n * n, full_), adj_(n * n), grid_(n * n, -1), row_used_(n, 0),
        col_used_(n, 0) {
    for (int k = 0; k < 3; ++k) {
      for (int s = 0; s < n; ++s) {
        if (shape_class(s) == k) class_mask_[k] |= 1u << s;
      }
    }
    for (const Given& g : givens) domain_[g.row * n + g.col] &= 1u << g.symbol;
    for (const Constraint& c : constraints) {
      const unsigned bit = 1u << c.symbol;
      switch (c.type) {
        case ConstraintType::placement:
          for (int i = 0; i < n; ++i) {
            const bool allowed = c.before ? i < c.pivot : i > c.pivot;
            if (allowed) continue;
            const int cell = c.along_row ? c.line * n + i : i * n + c.line;
            domain_[cell] &= ~bit;
          }
          break;
        case ConstraintType::exclusion: domain_[c.ar * n + c.ac] &= ~bit; break;
        case ConstraintType::adjacent_same:
        case ConstraintType::adjacent_different: {
          const bool same = c.type == ConstraintType::adjacent_same;
          adj_[c.ar * n + c.ac].push_back({c.br * n + c.bc, same});
          adj_[c.br * n + c.bc].push_back({c.ar * n + c.ac, same});
          break;
        }
      }
    }
  }

  SolveResult run(long long limit, std::size_t keep) {
    limit_ = limit;
    keep_ = keep;
    search();
    return std::move(result_);
  }

 private:
  unsigned candidates(int cell) const {
    const int r = cell / n_, c = cell % n_;
    unsigned m = domain_[cell] & ~row_used_[r] & ~col_used_[c];
    for (const auto& [other, same] : adj_[cell]) {
      const int v = grid_[other];
      if (v < 0) continue;
      const unsigned cls = class_mask_[shape_class(v)];
      m &= same ? cls : ~cls;
    }
    return m & full_;
  }

  void search() {
    if (result_.count >= limit_) return;
    int best = -1;
    unsigned best_mask = 0;
    int best_pop = 99;
    for (int cell = 0; cell < n_ * n_; ++cell) {
      if (grid_[cell] >= 0) continue;
      const unsigned m = candidates(cell);
      const int pop = std::popcount(m);
      if (pop == 0) return;
      if (pop < best_pop) best = cell, best_mask = m, best_pop = pop;
      if (pop == 1) break;
    }
    if (best < 0) {
      ++result_.count;
      if (result_.found.size() < keep_) {
        Square s(n_, std::vector<int>(n_));
        for (int i = 0; i < n_ * n_; ++i) s[i / n_][i % n_] = grid_[i];
        result_.found.push_back(std::move(s));
      }
      return;
    }
    const int r = best / n_, c = best % n_;
    for (unsigned m = best_mask; m; m &= m - 1) {
      const int v = std::countr_zero(m);
      grid_[best] = v;
      row_used_[r] |= 1u << v;
      col_used_[c] |= 1u << v;
      search();
      row_used_[r] &= ~(1u << v);
      col_used_[c] &= ~(1u << v);
      grid_[best] = -1;
      if (result_.count >= limit_) return;
    }
  }

  int n_;
  unsigned full_;
  std::array<unsigned, 3> class_mask_{};
  std::vector<unsigned> domain_;
  std::vector<std::vector<std::pair<int, bool>>> adj_;
  std::vector<int> grid_;
  std::vector<unsigned> row_used_, col_used_;
  long long limit_ = 0;
  std::size_t keep_ = 0;
  SolveResult result_;
};

Square random_latin(int n, Rng& rng) {
  std::vector<int> rows(n), cols(n), syms(n);
  for (int i = 0; i < n; ++i) rows[i] = cols[i] = syms[i] = i;
  rng.shuffle(rows);
  rng.shuffle(cols);
  rng.shuffle(syms);
  Square s(n, std::vector<int>(n));
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) s[rows[r]][cols[c]] = syms[(r + c) % n];
  }
  return s;
}

std::vector<Constraint> true_constraints(const Square& sol, ConstraintType type) {
  const int n = static_cast<int>(sol.size());
  std::vector<Constraint> out;
  switch (type) {
    case ConstraintType::placement:
      for (int line = 0; line < n; ++line) {
        for (int i = 0; i < n; ++i) {
          for (bool along_row : {true, false}) {
            const int s = along_row ? sol[line][i] : sol[i][line];
            for (int pivot = 0; pivot < n; ++pivot) {
              if (pivot == i) continue;
              Constraint c;
              c.type = type;
              c.symbol = s;
              c.along_row = along_row;
              c.line = line;
              c.pivot = pivot;
              c.before = i < pivot;
              out.push_back(c);
            }
          }
        }
      }
      break;
    case ConstraintType::exclusion:
      for (int r = 0; r < n; ++r) {
        for (int c = 0; c < n; ++c) {
          for (int s = 0; s < n; ++s) {
            if (s == sol[r][c]) continue;
            Constraint k;
            k.type = type;
            k.symbol = s;
            k.ar = r;
            k.ac = c;
            out.push_back(k);
          }
        }
      }
      break;
    case ConstraintType::adjacent_same:
    case ConstraintType::adjacent_different:
      for (int r = 0; r < n; ++r) {
        for (int c = 0; c < n; ++c) {
          for (auto [dr, dc] : {std::pair{0, 1}, std::pair{1, 0}}) {
            const int r2 = r + dr, c2 = c + dc;
            if (r2 >= n || c2 >= n) continue;
            const bool same = shape_class(sol[r][c]) == shape_class(sol[r2][c2]);
            if (same != (type == ConstraintType::adjacent_same)) continue;
            Constraint k;
            k.type = type;
            k.ar = r;
            k.ac = c;
            k.br = r2;
            k.bc = c2;
            out.push_back(k);
          }
        }
      }
      break;
  }
  return out;
}

void draw_symbol(Scene& s, int symbol, double cx, double cy, double r) {
  const Color color = palette::symbol[symbol];
  switch (shape_class(symbol)) {
    case 0: s.circle(cx, cy, r, color); break;
    case 1: s.rect(cx - r * 0.88, cy - r * 0.88, r * 1.76, r * 1.76, color); break;
    default: s.polygon({{cx, cy - r}, {cx + r * 0.95, cy + r * 0.75}, {cx - r * 0.95, cy + r * 0.75}}, color); break;
  }
}

void draw_grid(Scene& s, const vision::GridGeometry& g, const Square* values, const std::vector<Given>* givens) {
  const int n = g.rows;
  const double cs = g.cell_w;
  const double label = std::min(cs * 0.45, 40.0);
  for (int i = 0; i < n; ++i) {
    s.text(g.center_x(i), g.y0 - label, label, col_label(i), palette::wall_black);
    s.text(g.x0 - label, g.center_y(i), label, row_label(i), palette::wall_black);
  }
  if (values) {
    for (int r = 0; r < n; ++r) {
      for (int c = 0; c < n; ++c) draw_symbol(s, (*values)[r][c], g.center_x(c), g.center_y(r), cs * 0.34);
    }
  }
  if (givens) {
    for (const Given& gv : *givens) draw_symbol(s, gv.symbol, g.center_x(gv.col), g.center_y(gv.row), cs * 0.34);
  }
  const double w = std::max(cs * 0.03, 1.5);
  for (int i = 1; i < n; ++i) {
    s.line({g.x0 + i * cs, g.y0}, {g.x0 + i * cs, g.y0 + n * cs}, palette::wall_black, w);
    s.line({g.x0, g.y0 + i * cs}, {g.x0 + n * cs, g.y0 + i * cs}, palette::wall_black, w);
  }
  s.rect(g.x0, g.y0, n * cs, n * cs, std::nullopt, palette::wall_black, 2 * w);
}

void draw_arrow(Scene& s, Point from, Point to, double w) {
  const double dx = to.x - from.x, dy = to.y - from.y;
  const double len = std::hypot(dx, dy), ux = dx / len, uy = dy / len, head = len * 0.4;
  s.line(from, to, palette::wall_black, w);
  s.polyline({{to.x - ux * head - uy * head * 0.7, to.y - uy * head + ux * head * 0.7},
              to,
              {to.x - ux * head + uy * head * 0.7, to.y - uy * head - ux * head * 0.7}},
             palette::wall_black, w);
}

void draw_constraint(Scene& s, const Constraint& c, double x, double cy, double h) {
  const double ts = h * 0.62, w = h * 0.07;
  switch (c.type) {
    case ConstraintType::placement: {
      const std::string head = c.along_row ? row_label(c.line) : col_label(c.line);
      const std::string tail = c.along_row ? col_label(c.pivot) : row_label(c.pivot);
      s.text(x + 0.4 * h, cy, ts, head, palette::wall_black);
      draw_symbol(s, c.symbol, x + 1.3 * h, cy, h * 0.33);
      const double ax = x + 2.4 * h;
      if (c.along_row) {
        const double d = c.before ? -0.4 * h : 0.4 * h;
        draw_arrow(s, {ax - d, cy}, {ax + d, cy}, w);
      } else {
        const double d = c.before ? -0.35 * h : 0.35 * h;
        draw_arrow(s, {ax, cy - d}, {ax, cy + d}, w);
      }
      s.text(x + 3.4 * h, cy, ts, tail, palette::wall_black);
      break;
    }
    case ConstraintType::exclusion: {
      const double sx = x + 0.6 * h, r = h * 0.33;
      draw_symbol(s, c.symbol, sx, cy, r);
      s.line({sx - r * 1.1, cy - r * 1.1}, {sx + r * 1.1, cy + r * 1.1}, palette::mark_red, w * 0.8);
      s.line({sx - r * 1.1, cy + r * 1.1}, {sx + r * 1.1, cy - r * 1.1}, palette::mark_red, w * 0.8);
      s.text(x + 2.0 * h, cy, ts, cell_label(c.ar, c.ac), palette::wall_black);
      break;
    }
    case ConstraintType::adjacent_same:
    case ConstraintType::adjacent_different: {
      s.text(x + 0.7 * h, cy, ts, cell_label(c.ar, c.ac), palette::wall_black);
      s.text(x + 1.9 * h, cy, ts, "=", palette::wall_black);
      if (c.type == ConstraintType::adjacent_different) {
        s.line({x + 1.65 * h, cy + 0.3 * h}, {x + 2.15 * h, cy - 0.3 * h}, palette::mark_red, w);
      }
      s.text(x + 3.1 * h, cy, ts, cell_label(c.br, c.bc), palette::wall_black);
      break;
    }
  }
}

class LogicTask final : public TaskSpec {
 public:
  explicit LogicTask(LogicSpec spec) : spec_(std::move(spec)) {}

  VerificationResult verify(const RasterImage& candidate, const VerifyOptions&) const override {
    const auto m = vision::sample_grid(candidate, answer_geometry(spec_.n), symbol_classes(spec_.n),
                                       vision::SampleMode::inverse_distance_vote);
    return judge(spec_, m);
  }

  nlohmann::json structure() const override {
    nlohmann::json cons = nlohmann::json::array();
    for (const auto& c : spec_.constraints) cons.push_back(to_json(c));
    nlohmann::json givens = nlohmann::json::array();
    for (const auto& g : spec_.givens) givens.push_back({g.row, g.col, g.symbol});
    nlohmann::json symbols = nlohmann::json::array();
    for (int i = 0; i < spec_.n; ++i) symbols.push_back({{"color", i}, {"shape_class", shape_class(i)}});
    return {{"n", spec_.n},         {"symbols", symbols}, {"solution", spec_.solution},
            {"constraints", cons}, {"givens", givens}};
  }

  nlohmann::json geometry() const override { return {{"grid", answer_geometry(spec_.n)}}; }

 private:
  LogicSpec spec_;
};

}  // namespace

bool Constraint::holds(const Square& s) const {
  const int n = static_cast<int>(s.size());
  switch (type) {
    case ConstraintType::placement:
      for (int i = 0; i < n; ++i) {
        const int v = along_row ? s[line][i] : s[i][line];
        if (v == symbol) return before ? i < pivot : i > pivot;
      }
      return false;
    case ConstraintType::exclusion: return s[ar][ac] != symbol;
    case ConstraintType::adjacent_same: return shape_class(s[ar][ac]) == shape_class(s[br][bc]);
    case ConstraintType::adjacent_different: return shape_class(s[ar][ac]) != shape_class(s[br][bc]);
  }
  return false;
}

SolveResult solve(int n, const std::vector<Constraint>& constraints, const std::vector<Given>& givens,
                  long long limit, std::size_t keep) {
  return Solver(n, constraints, givens).run(limit, keep);
}

bool is_latin(const Square& s) {
  const int n = static_cast<int>(s.size());
  for (int i = 0; i < n; ++i) {
    unsigned row = 0, col = 0;
    for (int j = 0; j < n; ++j) {
      if (s[i][j] < 0 || s[i][j] >= n || s[j][i] < 0 || s[j][i] >= n) return false;
      row |= 1u << s[i][j];
      col |= 1u << s[j][i];
    }
    if (std::popcount(row) != n || std::popcount(col) != n) return false;
  }
  return true;
}

nlohmann::json to_json(const Constraint& c) {
  nlohmann::json j = {{"type", type_name(c.type)}};
  switch (c.type) {
    case ConstraintType::placement:
      j.update({{"symbol", c.symbol},
                {"axis", c.along_row ? "row" : "column"},
                {"line", c.line},
                {"side", c.before ? "before" : "after"},
                {"pivot", c.pivot}});
      break;
    case ConstraintType::exclusion: j.update({{"symbol", c.symbol}, {"cell", {c.ar, c.ac}}}); break;
    default: j.update({{"a", {c.ar, c.ac}}, {"b", {c.br, c.bc}}}); break;
  }
  return j;
}

VerificationResult judge(const LogicSpec& spec, const vision::ClassMatrix& sampled) {
  const int n = spec.n;
  Square cand(n, std::vector<int>(n, -1));
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      const int v = sampled[r][c];
      if (v < 0 || v >= n) {
        return VerificationResult::fail("unreadable cell", {{"diagnosis", "unreadable"}, {"cell", {r, c}}});
      }
      cand[r][c] = v;
    }
  }
  // Latin validity: first repeated symbol in a row, then in a column.
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      for (int k = 0; k < c; ++k) {
        if (cand[r][k] == cand[r][c]) {
          return VerificationResult::fail("symbol repeated in a row",
                                          {{"diagnosis", "latin"}, {"check", 1}, {"cells", {{r, k}, {r, c}}}});
        }
        if (cand[k][r] == cand[c][r]) {
          return VerificationResult::fail("symbol repeated in a column",
                                          {{"diagnosis", "latin"}, {"check", 1}, {"cells", {{k, r}, {c, r}}}});
        }
      }
    }
  }
  for (std::size_t i = 0; i < spec.constraints.size(); ++i) {
    if (!spec.constraints[i].holds(cand)) {
      return VerificationResult::fail("constraint violated", {{"diagnosis", "constraint"},
                                                               {"check", 2},
                                                               {"constraint_id", i},
                                                               {"constraint", to_json(spec.constraints[i])}});
    }
  }
  for (std::size_t i = 0; i < spec.givens.size(); ++i) {
    const Given& g = spec.givens[i];
    if (cand[g.row][g.col] != g.symbol) {
      return VerificationResult::fail("given cell changed", {{"diagnosis", "given"},
                                                              {"check", 2},
                                                              {"constraint_id", spec.constraints.size() + i},
                                                              {"cell", {g.row, g.col}}});
    }
  }
  if (cand != spec.solution) {
    return VerificationResult::fail("grid differs from the solution", {{"diagnosis", "exact"}, {"check", 3}});
  }
  return VerificationResult::ok();
}

LogicSpec build(int n, int num_constraints, int num_types, Rng& rng) {
  LogicSpec spec;
  spec.n = n;
  spec.solution = random_latin(n, rng);

  std::vector<std::vector<Constraint>> pools;
  for (int t = 0; t < num_types; ++t) pools.push_back(true_constraints(spec.solution, kTypeOrder[t]));

  auto alternative = [&]() -> std::optional<Square> {
    const auto res = solve(n, spec.constraints, spec.givens, 2, 2);
    for (const auto& s : res.found) {
      if (s != spec.solution) return s;
    }
    return std::nullopt;
  };

  for (int i = 0; static_cast<int>(spec.constraints.size()) < num_constraints; ++i) {
    if (i > 4 * num_constraints + 16) throw GenerationRetry("logic_grid: constraint pools exhausted");
    auto& pool = pools[i % num_types];
    std::erase_if(pool, [&](const Constraint& c) {
      return std::find(spec.constraints.begin(), spec.constraints.end(), c) != spec.constraints.end();
    });
    if (pool.empty()) continue;
    // Prefer a constraint that rules out the current alternative solution.
    std::vector<std::size_t> cutting;
    if (const auto alt = alternative()) {
      for (std::size_t k = 0; k < pool.size(); ++k) {
        if (!pool[k].holds(*alt)) cutting.push_back(k);
      }
    }
    const std::size_t pick = cutting.empty() ? rng.index(pool.size()) : cutting[rng.index(cutting.size())];
    spec.constraints.push_back(pool[pick]);
  }

  while (const auto alt = alternative()) {
    std::vector<std::pair<int, int>> diff;
    for (int r = 0; r < n; ++r) {
      for (int c = 0; c < n; ++c) {
        if ((*alt)[r][c] != spec.solution[r][c]) diff.push_back({r, c});
      }
    }
    const auto [r, c] = diff[rng.index(diff.size())];
    spec.givens.push_back({r, c, spec.solution[r][c]});
  }
  return spec;
}

vision::GridGeometry answer_geometry(int n) { return {110, 110, 840.0 / n, 840.0 / n, n, n}; }

vision::ClassSet symbol_classes(int n) {
  vision::ClassSet set;
  for (int i = 0; i < n; ++i) set.classes.push_back({i, palette::symbol[i], false});
  set.classes.push_back({n, palette::background_white, true});
  set.classes.push_back({n + 1, palette::wall_black, true});
  return set;
}

Scene render_puzzle(const LogicSpec& spec) {
  Scene s;
  const int n = spec.n;
  // Legend of the symbol set.
  const double step = std::min(60.0, 520.0 / n);
  for (int i = 0; i < n; ++i) draw_symbol(s, i, 90 + step * (i + 0.5), 60, step * 0.32);
  const vision::GridGeometry g{90, 190, 520.0 / n, 520.0 / n, n, n};
  draw_grid(s, g, nullptr, &spec.givens);
  const double h = std::min(46.0, 900.0 / std::max<std::size_t>(spec.constraints.size(), 1));
  for (std::size_t i = 0; i < spec.constraints.size(); ++i) {
    draw_constraint(s, spec.constraints[i], 680, 50 + h * (i + 0.5), h);
  }
  s.line({655, 40}, {655, 960}, palette::neutral_gray, 3);
  return s;
}

Scene render_answer(const Square& sq) {
  Scene s;
  draw_grid(s, answer_geometry(static_cast<int>(sq.size())), &sq, nullptr);
  return s;
}

}  // namespace tacit::logic

namespace tacit::tasks {

PuzzleInstance generate_logicgrid(const Params& params, Rng& rng) {
  using namespace tacit::logic;
  const int n = static_cast<int>(params.at("grid"));
  const int nc = static_cast<int>(params.at("constraints"));
  const int nt = static_cast<int>(params.at("types"));
  LogicSpec spec = build(n, nc, nt, rng);

  // Solutions of the puzzle with one item dropped. Each differs from the
  // answer exactly where the dropped item bites.
  auto without_constraint = [&](std::size_t j) {
    auto cons = spec.constraints;
    cons.erase(cons.begin() + static_cast<long>(j));
    return solve(n, cons, spec.givens, 3, 3).found;
  };
  auto without_given = [&](std::size_t j) {
    auto givens = spec.givens;
    givens.erase(givens.begin() + static_cast<long>(j));
    return solve(n, spec.constraints, givens, 3, 3).found;
  };
  std::vector<Square> used;
  auto fresh = [&](const std::vector<Square>& sols) -> std::optional<Square> {
    for (const auto& s : sols) {
      if (s != spec.solution && std::find(used.begin(), used.end(), s) == used.end()) return s;
    }
    return std::nullopt;
  };

  std::vector<std::size_t> order(spec.constraints.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  rng.shuffle(order);
  std::vector<std::pair<Square, std::size_t>> violations;
  for (std::size_t j : order) {
    if (violations.size() == 3) break;
    if (auto alt = fresh(without_constraint(j))) {
      used.push_back(*alt);
      violations.push_back({*alt, j});
    }
  }
  if (violations.size() < 2) throw GenerationRetry("logic_grid: too few binding constraints");

  std::optional<Square> non_unique;
  nlohmann::json nu_note = nlohmann::json::object();
  std::vector<std::size_t> gorder(spec.givens.size());
  for (std::size_t i = 0; i < gorder.size(); ++i) gorder[i] = i;
  rng.shuffle(gorder);
  for (std::size_t j : gorder) {
    if ((non_unique = fresh(without_given(j)))) {
      nu_note = {{"dropped", "given"}, {"index", j}};
      break;
    }
  }
  std::string nu_diag = "given";
  if (!non_unique) {
    if (violations.size() < 3) throw GenerationRetry("logic_grid: no alternative for non_unique");
    non_unique = violations.back().first;
    nu_note = {{"dropped", "constraint"}, {"index", violations.back().second}, {"reason", "no binding given"}};
    nu_diag = "constraint";
  } else {
    used.push_back(*non_unique);
  }

  // Row swap breaking the Latin property.
  Square swapped = spec.solution;
  const int row = static_cast<int>(rng.index(n));
  const int c1 = static_cast<int>(rng.index(n));
  const int c2 = static_cast<int>((c1 + 1 + rng.index(n - 1)) % n);
  std::swap(swapped[row][c1], swapped[row][c2]);

  PuzzleInstance inst;
  inst.puzzle = render_puzzle(spec);
  inst.solution = render_answer(spec.solution);
  inst.distractors.push_back({render_answer(violations[0].first), "constraint_violation", "constraint",
                              {{"constraint_id", violations[0].second}}});
  inst.distractors.push_back(
      {render_answer(swapped), "symbol_swap", "latin", {{"row", row}, {"cols", {c1, c2}}}});
  inst.distractors.push_back({render_answer(*non_unique), "non_unique", nu_diag, nu_note});
  inst.distractors.push_back({render_answer(violations[1].first), "constraint_violation", "constraint",
                              {{"constraint_id", violations[1].second}, {"repeat", true}}});

  // Every distractor must be rejected for its intended reason.
  const std::array<const Square*, 4> grids = {&violations[0].first, &swapped, &*non_unique, &violations[1].first};
  for (std::size_t i = 0; i < grids.size(); ++i) {
    if (judge(spec, *grids[i]).diagnosis() != inst.distractors[i].expected_diagnosis) {
      throw GenerationRetry("logic_grid: distractor " + inst.distractors[i].violation + " misdiagnosed");
    }
  }
  inst.spec = std::make_shared<LogicTask>(std::move(spec));
  return inst;
}

}  // namespace tacit::tasks
