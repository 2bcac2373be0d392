#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <vector>

#include "tacit/core/rng.hpp"
#include "tacit/core/types.hpp"
#include "tacit/vision/vision.hpp"

namespace tacit::maze {

using Cell = vision::LayerCell;

// Wall bits per cell.
enum : std::uint8_t { kNorth = 1, kEast = 2, kSouth = 4, kWest = 8 };

struct Portal {
  int layer = 0;  // links `layer` and `layer + 1`
  int row = 0, col = 0;
  int color = 0;  // index into palette::portal
};

struct MazeSpec {
  int n = 0;
  int layers = 0;
  // walls[layer][row * n + col]: bitmask of present walls.
  std::vector<std::vector<std::uint8_t>> walls;
  Cell start, end;
  std::vector<Portal> portals;
  std::vector<Cell> solution;

  bool wall(const Cell& c, int dir_bit) const { return walls[c.layer][c.row * n + c.col] & dir_bit; }
  std::optional<int> portal_at(int lower_layer, int row, int col) const;
  // Legal single moves from `c`.
  std::vector<Cell> neighbors(const Cell& c) const;
};

// Shortest legal route (BFS); empty when unreachable.
std::vector<Cell> solve(const MazeSpec& spec, const Cell& from, const Cell& to,
                        const std::set<Cell>& blocked = {});

// The verifier's decision on an already-extracted blue cell set.
VerificationResult diagnose(const MazeSpec& spec, const std::set<Cell>& blue);

// One grid per layer, in scene units.
std::vector<vision::GridGeometry> layout(const MazeSpec& spec);

Scene render_puzzle(const MazeSpec& spec);
// Puzzle plus the path; consecutive cells on different layers are not joined.
Scene render_path(const MazeSpec& spec, const std::vector<std::vector<Cell>>& runs);

MazeSpec build(int n, int layers, int portals, Rng& rng);

nlohmann::json to_json(const MazeSpec& spec);

}  // namespace tacit::maze
