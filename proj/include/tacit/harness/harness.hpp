#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "tacit/core/types.hpp"

namespace tacit::harness {

inline constexpr int kCandidates = 5;
inline constexpr int kDefaultTrack2Resolution = 1024;

struct PuzzleRef {
  std::string task;
  Difficulty difficulty = Difficulty::easy;
  std::uint64_t seed = 0;
};

// {task}_{difficulty}_{seed}
std::string puzzle_id(const std::string& task, Difficulty d, std::uint64_t seed);
// Accepts a puzzle id or a Track-1 file name ({id}.png); nullopt if malformed
// or the task is unknown.
std::optional<PuzzleRef> parse_puzzle_id(std::string_view text);

struct Track1Options {
  // Leave unparseable / unknown file names out of the accuracy denominator.
  bool skip_unparseable = false;
  int threads = 0;
};

/// Verifies `{task}_{difficulty}_{seed}.png` files against every puzzle in the
/// release manifest. Absent files are failures with reason "missing".
nlohmann::json score_track1(const std::filesystem::path& release, const std::filesystem::path& submission,
                            const Track1Options& options = {});

std::uint64_t default_shuffle_seed(std::uint64_t global_seed);

/// Five-way candidate lists in a per-puzzle order drawn from
/// (shuffle_seed, puzzle seed), plus the answer key. `resolution` defaults to
/// 1024, or the release's first resolution when 1024 was not built.
nlohmann::json assemble_track2(const std::filesystem::path& release, std::optional<std::uint64_t> shuffle_seed = {},
                               std::optional<int> resolution = {});

// Field-exact check of a Track-2 submission document; empty when valid.
std::vector<std::string> validate_track2_submission(const nlohmann::json& doc);

/// Exact-match scoring against the key. Throws ValidationError when the
/// document is malformed or a record disagrees with the key's correct index.
nlohmann::json score_track2(const nlohmann::json& key, const nlohmann::json& submission);

/// Per-task, per-domain (mean of member tasks), per-difficulty, cross-track
/// gap (track2 - track1) and Track-2 violation confusion.
nlohmann::json aggregate(const std::vector<nlohmann::json>& fragments);

}  // namespace tacit::harness
