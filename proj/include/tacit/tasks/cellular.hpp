#pragma once

#include <cstdint>
#include <vector>

#include "tacit/core/rng.hpp"
#include "tacit/core/types.hpp"
#include "tacit/vision/vision.hpp"

namespace tacit::ca {

/// next = table[current][(sum of the 8 Moore neighbours) mod states],
/// toroidal wrap.
struct Rule {
  int states = 2;
  std::vector<std::uint8_t> table;  // states x states, row = current state

  int at(int cur, int sum) const { return table[cur * states + sum]; }
  bool operator==(const Rule&) const = default;
};

struct Grid {
  int n = 0;
  std::vector<std::uint8_t> cells;  // row-major

  int at(int r, int c) const { return cells[r * n + c]; }
  bool operator==(const Grid&) const = default;
};

Grid step(const Grid& g, const Rule& rule, Exec exec = Exec::parallel);
Grid simulate(const Grid& g, const Rule& rule, int steps, Exec exec = Exec::parallel);

namespace reference {
// Per-cell loop with explicit modular wrap; no threading.
Grid simulate(const Grid& g, const Rule& rule, int steps);
}  // namespace reference

// (current, sum mod S) pairs exercised while stepping `steps` times.
std::vector<bool> coverage(const Grid& g, const Rule& rule, int steps);

int count_diffs(const std::vector<std::uint8_t>& a, const std::vector<std::uint8_t>& b);

vision::ClassSet state_classes(int states);

// Grid drawn alone, filling the canvas (the forward answer format).
vision::GridGeometry answer_grid_geometry(int n);
// Rule table drawn alone (the inverse answer format); rows x cols = S x S.
vision::GridGeometry answer_table_geometry(int states);

Scene render_grid_answer(const Grid& g);
Scene render_table_answer(const Rule& rule);

struct ForwardSpec {
  Grid initial;
  Rule rule;
  int steps = 1;
  Grid final;
};

struct InverseSpec {
  Grid initial;
  Rule rule;
  int steps = 1;
  Grid final;
};

Scene render_forward_puzzle(const ForwardSpec& spec);
Scene render_inverse_puzzle(const InverseSpec& spec);

// The verifiers' decisions on already-sampled grids/tables.
VerificationResult judge_forward(const ForwardSpec& spec, const vision::ClassMatrix& sampled);
VerificationResult judge_inverse(const InverseSpec& spec, const vision::ClassMatrix& sampled);

}  // namespace tacit::ca
