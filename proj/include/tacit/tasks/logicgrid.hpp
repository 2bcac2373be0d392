#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "tacit/core/rng.hpp"
#include "tacit/core/types.hpp"
#include "tacit/vision/vision.hpp"

namespace tacit::logic {

using Square = std::vector<std::vector<int>>;  // [row][col] -> symbol

// Symbol i: palette::symbol[i], shape class i % 3 (circle, square, triangle).
inline int shape_class(int symbol) { return symbol % 3; }

enum class ConstraintType { placement, exclusion, adjacent_same, adjacent_different };

struct Constraint {
  ConstraintType type = ConstraintType::placement;
  int symbol = 0;
  // placement: `along_row` -> symbol in row `line` lies before (left of) or
  // after column `pivot`; otherwise in column `line` above / below row `pivot`.
  bool along_row = true;
  bool before = true;
  int line = 0, pivot = 0;
  // exclusion: cell a; adjacency: cells a and b.
  int ar = 0, ac = 0, br = 0, bc = 0;

  bool holds(const Square& s) const;
  bool operator==(const Constraint&) const = default;
};

struct Given {
  int row = 0, col = 0, symbol = 0;
};

struct LogicSpec {
  int n = 0;
  Square solution;
  std::vector<Constraint> constraints;
  std::vector<Given> givens;
};

struct SolveResult {
  long long count = 0;
  std::vector<Square> found;  // up to `keep`
};

/// Exhaustive backtracking over Latin squares consistent with the givens
/// and constraints. Stops once `limit` solutions are counted.
SolveResult solve(int n, const std::vector<Constraint>& constraints, const std::vector<Given>& givens,
                  long long limit, std::size_t keep = 2);

bool is_latin(const Square& s);

// Latin square -> first violated constraint (givens after typed ones) -> exact.
VerificationResult judge(const LogicSpec& spec, const vision::ClassMatrix& sampled);

LogicSpec build(int n, int num_constraints, int num_types, Rng& rng);

vision::GridGeometry answer_geometry(int n);
vision::ClassSet symbol_classes(int n);

Scene render_puzzle(const LogicSpec& spec);
Scene render_answer(const Square& s);

nlohmann::json to_json(const Constraint& c);

}  // namespace tacit::logic
