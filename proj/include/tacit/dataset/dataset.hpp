#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "tacit/core/registry.hpp"

namespace tacit::dataset {

struct ReleaseConfig {
  std::string profile = "release";
  std::uint64_t global_seed = kDefaultGlobalSeed;
  int puzzles_per_cell = 200;
  std::vector<int> resolutions = {512, 1024, 2048};
  std::vector<int> tasks;  // task ids; empty means all ten
  // Per task id, per level. Missing entries fall back to the registry table.
  std::map<int, std::map<Difficulty, Params>> params;
  // Require params to equal the registry table (the canonical release).
  bool canonical = true;
  std::filesystem::path output;

  std::vector<int> task_ids() const;
  Params params_for(int task_id, Difficulty d) const;
  nlohmann::json to_json() const;
};

// YAML file; throws IoError when unreadable, ValidationError when invalid.
ReleaseConfig load_config(const std::filesystem::path& path);
ReleaseConfig parse_config(const std::string& yaml_text);
void validate(const ReleaseConfig& config);

// task_07_graph_isomorphism
std::string task_dir_name(int task_id);

// Per-puzzle file names inside a cell directory.
std::string puzzle_png(std::uint64_t seed);
std::string solution_png(std::uint64_t seed);
std::string distractor_png(std::uint64_t seed, std::size_t i);
std::string meta_name(std::uint64_t seed);

inline constexpr int kDistractors = 4;
inline constexpr int kImagesPerPuzzle = 2 + kDistractors;

struct BuildOptions {
  int threads = 0;  // 0: OpenMP default
  // Called after each puzzle with (done, total); serialized.
  std::function<void(std::size_t, std::size_t)> progress;
};

struct GateTally {
  std::size_t solutions = 0, solutions_passed = 0;
  std::size_t distractors = 0, distractors_failed = 0;
  std::size_t diagnosable = 0, diagnosis_matched = 0;
  double max_distractor_ssim = -1;  // SSIM tasks only; -1 when none
};

struct BuildResult {
  nlohmann::json manifest;
  std::map<int, GateTally> gates;  // by task id
  double seconds = 0;
};

/// Generates every puzzle of the config into `out` and writes manifest.json.
/// Images are staged and only moved into place after every solution passed
/// and every distractor failed verification at every resolution; a failing
/// gate throws GateError naming the puzzle.
BuildResult build_release(const ReleaseConfig& config, const std::filesystem::path& out,
                          const BuildOptions& options = {});

// Digest over the sorted (path, sha256) list of a manifest's files.
std::string files_digest(const nlohmann::json& files);

struct LoadedPuzzle {
  nlohmann::json metadata;
  PuzzleInstance instance;  // regenerated from the metadata
  std::map<int, std::vector<std::filesystem::path>> images;  // res -> puzzle, solution, distractors...
};

/// Reads a puzzle's metadata and regenerates it; throws ValidationError when
/// the regenerated structure differs from the stored metadata, IoError when
/// files are missing.
LoadedPuzzle load_puzzle(const std::filesystem::path& root, const std::string& task, const std::string& difficulty,
                         std::uint64_t seed);

// Recomputes file digests against manifest.json; returns mismatching paths.
std::vector<std::string> audit_release(const std::filesystem::path& root);

}  // namespace tacit::dataset
