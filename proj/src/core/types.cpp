#include "tacit/core/types.hpp"

#include <cmath>

#include "tacit/core/errors.hpp"
#include "tacit/core/rng.hpp"

namespace tacit {

std::string_view to_string(Difficulty d) {
  switch (d) {
    case Difficulty::easy: return "easy";
    case Difficulty::medium: return "medium";
    case Difficulty::hard: return "hard";
  }
  return "?";
}

Difficulty parse_difficulty(std::string_view s) {
  for (auto d : kDifficulties) {
    if (to_string(d) == s) return d;
  }
  throw ValidationError("unknown difficulty '" + std::string(s) + "'");
}

std::string_view to_string(Domain d) {
  switch (d) {
    case Domain::spatial: return "spatial";
    case Domain::pattern: return "pattern";
    case Domain::logical: return "logical";
    case Domain::graph: return "graph";
    case Domain::topology: return "topology";
    case Domain::geometric: return "geometric";
  }
  return "?";
}

Domain parse_domain(std::string_view s) {
  for (auto d : kDomains) {
    if (to_string(d) == s) return d;
  }
  throw ValidationError("unknown domain '" + std::string(s) + "'");
}

nlohmann::json params_to_json(const Params& p) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [k, v] : p) {
    if (v == std::floor(v) && std::abs(v) < 1e15) j[k] = static_cast<long long>(v);
    else j[k] = v;
  }
  return j;
}

Params params_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ValidationError("params must be an object");
  Params p;
  for (const auto& [k, v] : j.items()) {
    if (!v.is_number()) throw ValidationError("param '" + k + "' is not a number");
    p[k] = v.get<double>();
  }
  return p;
}

VerificationResult VerificationResult::ok(nlohmann::json details) {
  return {true, "ok", std::move(details)};
}

VerificationResult VerificationResult::fail(std::string reason, nlohmann::json details) {
  return {false, std::move(reason), std::move(details)};
}

std::string VerificationResult::diagnosis() const {
  if (details.is_object() && details.contains("diagnosis") && details["diagnosis"].is_string()) {
    return details["diagnosis"].get<std::string>();
  }
  return {};
}

nlohmann::json PuzzleInstance::metadata() const {
  nlohmann::json j;
  j["format"] = "tacit-puzzle/1";
  j["task_id"] = task_id;
  j["task_name"] = task_name;
  j["seed"] = seed;
  j["difficulty"] = std::string(to_string(difficulty));
  j["domain"] = std::string(to_string(domain));
  j["params"] = params_to_json(params);
  j["rng"] = std::string(Rng::algorithm_id);
  j["attempt"] = attempt;
  nlohmann::json ds = nlohmann::json::array();
  for (std::size_t i = 0; i < distractors.size(); ++i) {
    nlohmann::json d = {{"index", i}, {"violation", distractors[i].violation}};
    if (!distractors[i].note.empty()) d["note"] = distractors[i].note;
    ds.push_back(std::move(d));
  }
  j["distractors"] = std::move(ds);
  if (spec) {
    const auto answer = spec->binary_answer();
    j["binary"] = answer.has_value();
    if (answer) j["answer"] = *answer;
    j["geometry"] = spec->geometry();
    j["structure"] = spec->structure();
  }
  return j;
}

}  // namespace tacit
