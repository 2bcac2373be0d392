#include "tacit/core/registry.hpp"

#include <cmath>
#include <string>

#include "tacit/core/errors.hpp"
#include "tacit/tasks/generators.hpp"

namespace tacit {

namespace {

DifficultyRange axis(std::string name, double lo, double hi, std::array<double, 3> levels, bool integer = true,
                     bool increasing = true) {
  return {std::move(name), lo, hi, levels, integer, increasing};
}

std::vector<TaskDescriptor> build_tasks() {
  using namespace tasks;
  std::vector<TaskDescriptor> t;
  t.push_back({1, "maze", Domain::spatial, false,
               {axis("grid", 4, 128, {8, 16, 32}), axis("layers", 1, 8, {1, 2, 3}), axis("portals", 0, 20, {0, 2, 5})},
               {"wall_breach", "portal_skip", "disconnected", "wrong_exit"},
               generate_maze});
  // complexity: 0 = additive rules only, 1 = at least one compositional rule.
  t.push_back({2, "raven", Domain::pattern, false,
               {axis("rules", 1, 3, {1, 2, 3}), axis("complexity", 0, 1, {0, 0, 1})},
               {"wrong_shape", "wrong_color", "wrong_rotation", "wrong_count", "wrong_size"},
               generate_raven});
  t.push_back({3, "ca_forward", Domain::pattern, false,
               {axis("grid", 4, 64, {8, 16, 32}), axis("states", 2, 8, {2, 4, 8}), axis("steps", 1, 20, {1, 3, 5})},
               {"wrong_cell", "wrong_step_count", "wrong_rule"},
               generate_ca_forward});
  t.push_back({4, "ca_inverse", Domain::pattern, false,
               {axis("grid", 4, 64, {8, 16, 32}), axis("states", 2, 16, {4, 8, 16}), axis("steps", 1, 20, {1, 2, 3})},
               {"off_by_one_rule", "transposed_rule", "partial_rule"},
               generate_ca_inverse});
  t.push_back({5, "logic_grid", Domain::logical, false,
               {axis("grid", 3, 8, {4, 5, 6}), axis("constraints", 4, 20, {6, 10, 16}), axis("types", 1, 4, {2, 3, 4})},
               {"constraint_violation", "symbol_swap", "non_unique"},
               generate_logicgrid});
  t.push_back({6, "graph_coloring", Domain::graph, false,
               {axis("nodes", 4, 20, {6, 12, 20}), axis("density", 0.1, 1.0, {0.3, 0.4, 0.5}, false),
                axis("k", 2, 5, {4, 4, 3}, true, false)},
               {"adjacent_conflict", "missing_color", "wrong_k"},
               generate_coloring});
  t.push_back({7, "graph_isomorphism", Domain::graph, true,
               {axis("nodes", 4, 12, {5, 8, 12}), axis("distortion", 0, 1, {0.3, 0.6, 0.9}, false)},
               {"opposite_answer"},
               generate_isopair});
  t.push_back({8, "unknot", Domain::topology, true,
               {axis("crossings", 2, 15, {3, 6, 10})},
               {"opposite_answer"},
               generate_knot});
  t.push_back({9, "ortho_projection", Domain::geometric, false,
               {axis("faces", 4, 32, {6, 10, 16}), axis("concavities", 0, 4, {0, 1, 3})},
               {"wrong_axis", "missing_feature", "extra_feature", "mirrored"},
               generate_ortho});
  t.push_back({10, "iso_reconstruction", Domain::geometric, false,
               {axis("faces", 4, 32, {6, 10, 16}), axis("ambiguity", 0, 4, {0, 1, 2})},
               {"wrong_depth", "missing_face", "extra_volume", "rotated"},
               generate_isorec});
  return t;
}

}  // namespace

Params TaskDescriptor::params_for(Difficulty d) const {
  Params p;
  for (const auto& a : axes) p[a.axis] = a.at(d);
  return p;
}

const std::vector<TaskDescriptor>& list_tasks() {
  static const std::vector<TaskDescriptor> tasks = build_tasks();
  return tasks;
}

const TaskDescriptor& task_descriptor(int task_id) {
  const auto& all = list_tasks();
  if (task_id < 1 || task_id > static_cast<int>(all.size())) {
    throw ValidationError("unknown task id " + std::to_string(task_id));
  }
  return all[task_id - 1];
}

const TaskDescriptor& task_by_name(std::string_view name) {
  for (const auto& t : list_tasks()) {
    if (t.name == name) return t;
  }
  throw ValidationError("unknown task '" + std::string(name) + "'");
}

std::vector<DifficultyRange> difficulty_axes(int task_id) { return task_descriptor(task_id).axes; }

std::uint64_t derive_seed(std::uint64_t global_seed, int task_id, Difficulty difficulty, std::uint64_t index) {
  const std::uint64_t packed = (static_cast<std::uint64_t>(task_id) << 48) |
                               (static_cast<std::uint64_t>(difficulty) << 40) | (index & ((1ULL << 40) - 1));
  return mix64(mix64(global_seed) ^ packed);
}

void validate_params(const TaskDescriptor& task, const Params& params) {
  if (params.size() != task.axes.size()) {
    throw ValidationError(std::string(task.name) + ": expected " + std::to_string(task.axes.size()) + " params");
  }
  for (const auto& a : task.axes) {
    auto it = params.find(a.axis);
    if (it == params.end()) throw ValidationError(std::string(task.name) + ": missing param '" + a.axis + "'");
    const double v = it->second;
    if (!std::isfinite(v) || v < a.min || v > a.max) {
      throw ValidationError(std::string(task.name) + ": param '" + a.axis + "' out of range");
    }
    if (a.integer && v != std::floor(v)) {
      throw ValidationError(std::string(task.name) + ": param '" + a.axis + "' must be an integer");
    }
  }
}

PuzzleInstance generate_with(int task_id, Difficulty difficulty, const Params& params, std::uint64_t seed) {
  const TaskDescriptor& task = task_descriptor(task_id);
  validate_params(task, params);
  std::string last;
  for (std::uint32_t attempt = 0; attempt < kMaxAttempts; ++attempt) {
    Rng rng(retry_seed(seed, attempt));
    try {
      PuzzleInstance inst = task.generate(params, rng);
      inst.task_id = task.id;
      inst.task_name = std::string(task.name);
      inst.seed = seed;
      inst.difficulty = difficulty;
      inst.params = params;
      inst.domain = task.domain;
      inst.attempt = attempt;
      return inst;
    } catch (const GenerationRetry& e) {
      last = e.what();
    }
  }
  throw GenerationRetry(std::string(task.name) + ": retries exhausted (" + last + ")");
}

PuzzleInstance generate(int task_id, Difficulty difficulty, std::uint64_t seed) {
  return generate_with(task_id, difficulty, task_descriptor(task_id).params_for(difficulty), seed);
}

VerificationResult verify(const PuzzleInstance& instance, const RasterImage& candidate, const VerifyOptions& options) {
  if (candidate.width != candidate.height || !is_canonical_resolution(candidate.width)) {
    return VerificationResult::fail(
        "candidate is not a canonical square resolution",
        {{"width", candidate.width}, {"height", candidate.height}, {"diagnosis", "resolution"}});
  }
  return instance.spec->verify(candidate, options);
}

}  // namespace tacit
