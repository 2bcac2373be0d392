#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "tacit/scene/raster.hpp"
#include "tacit/scene/scene.hpp"

namespace tacit {

enum class Difficulty { easy = 0, medium = 1, hard = 2 };
inline constexpr std::array<Difficulty, 3> kDifficulties = {Difficulty::easy, Difficulty::medium, Difficulty::hard};

std::string_view to_string(Difficulty d);
Difficulty parse_difficulty(std::string_view s);

enum class Domain { spatial, pattern, logical, graph, topology, geometric };
inline constexpr std::array<Domain, 6> kDomains = {Domain::spatial, Domain::pattern,  Domain::logical,
                                                   Domain::graph,   Domain::topology, Domain::geometric};

std::string_view to_string(Domain d);
Domain parse_domain(std::string_view s);

// Axis name -> value. Integer axes hold integral doubles.
using Params = std::map<std::string, double>;

nlohmann::json params_to_json(const Params& p);
Params params_from_json(const nlohmann::json& j);

struct DifficultyRange {
  std::string axis;
  double min = 0;
  double max = 0;
  std::array<double, 3> level_values{};  // easy, medium, hard
  bool integer = true;
  // False for axes where a smaller value is harder (graph coloring k).
  bool increasing = true;

  double at(Difficulty d) const { return level_values[static_cast<std::size_t>(d)]; }
};

struct VerificationResult {
  bool passed = false;
  std::string reason;
  nlohmann::json details = nlohmann::json::object();

  static VerificationResult ok(nlohmann::json details = nlohmann::json::object());
  static VerificationResult fail(std::string reason, nlohmann::json details);

  // details["diagnosis"], or "" when absent.
  std::string diagnosis() const;
};

struct VerifyOptions {
  // Resolution the ground-truth raster is rendered at for SSIM tasks;
  // defaults to the candidate's own size.
  std::optional<int> reference_resolution;
};

/// Task-specific state that lets a puzzle be verified and compared
/// structurally. Immutable once generated.
class TaskSpec {
 public:
  virtual ~TaskSpec() = default;

  virtual VerificationResult verify(const RasterImage& candidate, const VerifyOptions& options) const = 0;

  // Complete structural description (the data the scenes are drawn from).
  virtual nlohmann::json structure() const = 0;

  // Geometry a verifier needs to read a candidate (grid origins, node
  // positions, ...). Empty object when not applicable.
  virtual nlohmann::json geometry() const { return nlohmann::json::object(); }

  // For binary tasks: the ground-truth answer.
  virtual std::optional<bool> binary_answer() const { return std::nullopt; }
};

struct Distractor {
  Scene scene;
  std::string violation;
  // Diagnosis the verifier is expected to report for this distractor; empty
  // for tasks without diagnosable checks.
  std::string expected_diagnosis;
  // Substitutions or variant info recorded in metadata.
  nlohmann::json note = nlohmann::json::object();
};

struct PuzzleInstance {
  int task_id = 0;
  std::string task_name;
  std::uint64_t seed = 0;
  Difficulty difficulty = Difficulty::easy;
  Params params;
  Domain domain = Domain::spatial;
  Scene puzzle;
  Scene solution;
  std::vector<Distractor> distractors;
  std::shared_ptr<const TaskSpec> spec;
  // Retry attempt that produced this instance (0 = first try).
  std::uint32_t attempt = 0;

  nlohmann::json metadata() const;
};

}  // namespace tacit
