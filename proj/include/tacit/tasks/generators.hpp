#pragma once

#include "tacit/core/rng.hpp"
#include "tacit/core/types.hpp"

// Entry points of the ten task generators (see registry.hpp for the contract).
namespace tacit::tasks {

PuzzleInstance generate_maze(const Params& params, Rng& rng);
PuzzleInstance generate_raven(const Params& params, Rng& rng);
PuzzleInstance generate_ca_forward(const Params& params, Rng& rng);
PuzzleInstance generate_ca_inverse(const Params& params, Rng& rng);
PuzzleInstance generate_logicgrid(const Params& params, Rng& rng);
PuzzleInstance generate_coloring(const Params& params, Rng& rng);
PuzzleInstance generate_isopair(const Params& params, Rng& rng);
PuzzleInstance generate_knot(const Params& params, Rng& rng);
PuzzleInstance generate_ortho(const Params& params, Rng& rng);
PuzzleInstance generate_isorec(const Params& params, Rng& rng);

}  // namespace tacit::tasks
