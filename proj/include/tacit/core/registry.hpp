#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "tacit/core/rng.hpp"
#include "tacit/core/types.hpp"

namespace tacit {

inline constexpr std::uint64_t kDefaultGlobalSeed = 42;
inline constexpr std::uint32_t kMaxAttempts = 64;

// Task generators fill puzzle, solution, distractors and spec; the registry
// stamps identity fields. They throw GenerationRetry to request a new seed.
using GenerateFn = PuzzleInstance (*)(const Params& params, Rng& rng);

struct TaskDescriptor {
  int id = 0;
  std::string_view name;
  Domain domain = Domain::spatial;
  bool binary = false;
  std::vector<DifficultyRange> axes;
  // Catalog of violation identifiers a distractor may carry.
  std::vector<std::string_view> violations;
  GenerateFn generate = nullptr;

  Params params_for(Difficulty d) const;
};

const std::vector<TaskDescriptor>& list_tasks();
const TaskDescriptor& task_descriptor(int task_id);
const TaskDescriptor& task_by_name(std::string_view name);

std::vector<DifficultyRange> difficulty_axes(int task_id);

/// Pure: mix64(mix64(global) ^ (task << 48 | level << 40 | index)).
/// Distinct for distinct triples with index < 2^40.
std::uint64_t derive_seed(std::uint64_t global_seed, int task_id, Difficulty difficulty, std::uint64_t index);

// Throws ValidationError on unknown/missing/extra axes or out-of-range values.
void validate_params(const TaskDescriptor& task, const Params& params);

PuzzleInstance generate(int task_id, Difficulty difficulty, std::uint64_t seed);
PuzzleInstance generate_with(int task_id, Difficulty difficulty, const Params& params, std::uint64_t seed);

// Non-canonical candidate sizes fail before reaching the task verifier.
VerificationResult verify(const PuzzleInstance& instance, const RasterImage& candidate,
                          const VerifyOptions& options = {});

}  // namespace tacit
