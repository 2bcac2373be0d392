#include "tacit/dataset/dataset.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <exception>
#include <set>

#include <omp.h>

#include "tacit/core/errors.hpp"
#include "tacit/core/io.hpp"
#include "tacit/scene/png.hpp"

namespace tacit::dataset {

namespace fs = std::filesystem;

namespace {

constexpr const char* kManifestFormat = "tacit-manifest/1";
constexpr const char* kNaming =
    "task_{NN}_{name}/{difficulty}/{resolution}/{seed}_puzzle.png, {seed}_solution.png, "
    "{seed}_distractor_{i}.png; metadata at task_{NN}_{name}/{difficulty}/{seed}_meta.json";

template <class T>
T scalar(const YAML::Node& node, const char* key) {
  try {
    return node.as<T>();
  } catch (const YAML::Exception&) {
    throw ValidationError(std::string("config: bad value for '") + key + "'");
  }
}

}  // namespace

std::vector<int> ReleaseConfig::task_ids() const {
  if (!tasks.empty()) return tasks;
  std::vector<int> all;
  for (const auto& t : list_tasks()) all.push_back(t.id);
  return all;
}

Params ReleaseConfig::params_for(int task_id, Difficulty d) const {
  if (auto t = params.find(task_id); t != params.end()) {
    if (auto p = t->second.find(d); p != t->second.end()) return p->second;
  }
  return task_descriptor(task_id).params_for(d);
}

nlohmann::json ReleaseConfig::to_json() const {
  nlohmann::json tasks_j = nlohmann::json::object();
  for (int id : task_ids()) {
    nlohmann::json levels = nlohmann::json::object();
    for (Difficulty d : kDifficulties) levels[std::string(to_string(d))] = params_to_json(params_for(id, d));
    tasks_j[std::string(task_descriptor(id).name)] = levels;
  }
  return {{"profile", profile},
          {"global_seed", global_seed},
          {"puzzles_per_cell", puzzles_per_cell},
          {"resolutions", resolutions},
          {"canonical", canonical},
          {"tasks", tasks_j}};
}

void validate(const ReleaseConfig& c) {
  if (c.puzzles_per_cell < 1) throw ValidationError("config: puzzles_per_cell must be >= 1");
  if (c.resolutions.empty()) throw ValidationError("config: no resolutions");
  std::set<int> seen;
  for (int r : c.resolutions) {
    if (!is_canonical_resolution(r)) throw ValidationError("config: resolution " + std::to_string(r) + " not in {512, 1024, 2048}");
    if (!seen.insert(r).second) throw ValidationError("config: duplicate resolution " + std::to_string(r));
  }
  for (int id : c.task_ids()) {
    const TaskDescriptor& t = task_descriptor(id);
    for (Difficulty d : kDifficulties) {
      const Params p = c.params_for(id, d);
      validate_params(t, p);
      if (c.canonical && p != t.params_for(d)) {
        throw ValidationError("config: " + std::string(t.name) + "/" + std::string(to_string(d)) +
                              " differs from the canonical parameter table");
      }
    }
  }
}

ReleaseConfig parse_config(const std::string& text) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    throw ValidationError(std::string("config: ") + e.what());
  }
  if (!root.IsMap()) throw ValidationError("config: top level must be a mapping");
  static const std::set<std::string> known = {"profile", "global_seed", "puzzles_per_cell", "resolutions",
                                              "tasks",   "canonical",   "output"};
  ReleaseConfig c;
  for (const auto& kv : root) {
    const auto key = kv.first.as<std::string>();
    if (!known.count(key)) throw ValidationError("config: unknown key '" + key + "'");
  }
  if (root["profile"]) c.profile = scalar<std::string>(root["profile"], "profile");
  if (root["global_seed"]) c.global_seed = scalar<std::uint64_t>(root["global_seed"], "global_seed");
  if (root["puzzles_per_cell"]) c.puzzles_per_cell = scalar<int>(root["puzzles_per_cell"], "puzzles_per_cell");
  if (root["canonical"]) c.canonical = scalar<bool>(root["canonical"], "canonical");
  if (root["output"]) c.output = scalar<std::string>(root["output"], "output");
  if (const auto r = root["resolutions"]) {
    if (!r.IsSequence()) throw ValidationError("config: resolutions must be a list");
    c.resolutions.clear();
    for (const auto& v : r) c.resolutions.push_back(scalar<int>(v, "resolutions"));
  }
  if (const auto t = root["tasks"]) {
    if (!t.IsMap()) throw ValidationError("config: tasks must be a mapping of task name to levels");
    for (const auto& task : t) {
      const TaskDescriptor& desc = task_by_name(task.first.as<std::string>());
      c.tasks.push_back(desc.id);
      if (task.second.IsNull()) continue;
      if (!task.second.IsMap()) throw ValidationError("config: " + std::string(desc.name) + " must map levels to params");
      for (const auto& level : task.second) {
        const Difficulty d = parse_difficulty(level.first.as<std::string>());
        Params p;
        for (const auto& axis : level.second) p[axis.first.as<std::string>()] = scalar<double>(axis.second, "params");
        c.params[desc.id][d] = p;
      }
    }
    std::sort(c.tasks.begin(), c.tasks.end());
  }
  validate(c);
  return c;
}

ReleaseConfig load_config(const fs::path& path) {
  const auto bytes = read_bytes(path);
  return parse_config(std::string(bytes.begin(), bytes.end()));
}

std::string task_dir_name(int task_id) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "task_%02d_", task_id);
  return buf + std::string(task_descriptor(task_id).name);
}

std::string puzzle_png(std::uint64_t seed) { return std::to_string(seed) + "_puzzle.png"; }
std::string solution_png(std::uint64_t seed) { return std::to_string(seed) + "_solution.png"; }
std::string distractor_png(std::uint64_t seed, std::size_t i) {
  return std::to_string(seed) + "_distractor_" + std::to_string(i) + ".png";
}
std::string meta_name(std::uint64_t seed) { return std::to_string(seed) + "_meta.json"; }

std::string files_digest(const nlohmann::json& files) {
  std::vector<std::pair<std::string, std::string>> rows;
  for (const auto& f : files) rows.emplace_back(f.at("path").get<std::string>(), f.at("sha256").get<std::string>());
  std::sort(rows.begin(), rows.end());
  std::string text;
  for (const auto& [p, h] : rows) text += h + "  " + p + "\n";
  return sha256_hex(text);
}

namespace {

struct Job {
  int task_id;
  Difficulty difficulty;
  int index;
  std::uint64_t seed;
};

struct JobOutput {
  std::vector<std::pair<std::string, std::string>> files;  // relative path, sha256
  GateTally tally;
  nlohmann::json entry;
  std::exception_ptr error;
};

std::string where(const Job& j, int res, const std::string& image) {
  return task_dir_name(j.task_id) + "/" + std::string(to_string(j.difficulty)) + " #" + std::to_string(j.index) +
         " seed " + std::to_string(j.seed) + " @" + std::to_string(res) + " " + image;
}

JobOutput run_job(const Job& job, const ReleaseConfig& config, const fs::path& stage) {
  JobOutput out;
  const PuzzleInstance inst =
      generate_with(job.task_id, job.difficulty, config.params_for(job.task_id, job.difficulty), job.seed);
  if (inst.distractors.size() != kDistractors) {
    throw GateError(where(job, 0, "") + ": expected 4 distractors, got " + std::to_string(inst.distractors.size()));
  }
  const std::string cell = task_dir_name(job.task_id) + "/" + std::string(to_string(job.difficulty));
  auto emit = [&](const std::string& rel, std::span<const std::uint8_t> bytes) {
    write_bytes(stage / rel, bytes);
    out.files.emplace_back(rel, sha256_hex(bytes));
  };

  nlohmann::json meta = inst.metadata();
  nlohmann::json images = nlohmann::json::object();
  for (int res : config.resolutions) {
    const std::string dir = cell + "/" + std::to_string(res) + "/";
    std::vector<std::string> names = {puzzle_png(job.seed), solution_png(job.seed)};
    const VerifyOptions vopt{res};

    const RasterImage solution = rasterize(inst.solution, res);
    const VerificationResult sv = verify(inst, solution, vopt);
    ++out.tally.solutions;
    if (!sv.passed) throw GateError(where(job, res, "solution") + " rejected: " + sv.reason);
    ++out.tally.solutions_passed;

    emit(dir + names[0], encode_png(rasterize(inst.puzzle, res)));
    emit(dir + names[1], encode_png(solution));
    for (std::size_t i = 0; i < inst.distractors.size(); ++i) {
      const Distractor& d = inst.distractors[i];
      const RasterImage img = rasterize(d.scene, res);
      const VerificationResult dv = verify(inst, img, vopt);
      ++out.tally.distractors;
      if (dv.passed) throw GateError(where(job, res, "distractor " + std::to_string(i)) + " (" + d.violation + ") accepted");
      ++out.tally.distractors_failed;
      if (!d.expected_diagnosis.empty()) {
        ++out.tally.diagnosable;
        out.tally.diagnosis_matched += dv.diagnosis() == d.expected_diagnosis;
      }
      if (dv.details.contains("ssim")) {
        out.tally.max_distractor_ssim = std::max(out.tally.max_distractor_ssim, dv.details["ssim"].get<double>());
      }
      names.push_back(distractor_png(job.seed, i));
      emit(dir + names.back(), encode_png(img));
    }
    images[std::to_string(res)] = names;
  }
  meta["images"] = images;
  meta["index"] = job.index;
  const std::string text = meta.dump(2) + "\n";
  const std::string rel = cell + "/" + meta_name(job.seed);
  write_text(stage / rel, text);
  out.files.emplace_back(rel, sha256_hex(text));
  out.entry = {{"task", inst.task_name},
               {"difficulty", std::string(to_string(job.difficulty))},
               {"index", job.index},
               {"seed", job.seed},
               {"attempt", inst.attempt}};
  return out;
}

void move_tree(const fs::path& from, const fs::path& to) {
  for (const auto& e : fs::recursive_directory_iterator(from)) {
    const fs::path target = to / fs::relative(e.path(), from);
    if (e.is_directory()) {
      fs::create_directories(target);
    } else {
      fs::rename(e.path(), target);
    }
  }
}

}  // namespace

BuildResult build_release(const ReleaseConfig& config, const fs::path& out, const BuildOptions& options) {
  validate(config);
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<Job> jobs;
  for (int id : config.task_ids()) {
    for (Difficulty d : kDifficulties) {
      for (int i = 0; i < config.puzzles_per_cell; ++i) {
        jobs.push_back({id, d, i, derive_seed(config.global_seed, id, d, static_cast<std::uint64_t>(i))});
      }
    }
  }

  std::error_code ec;
  fs::create_directories(out, ec);
  if (ec) throw IoError("cannot create " + out.string() + ": " + ec.message());
  const fs::path stage = out / ".staging";
  fs::remove_all(stage, ec);

  std::vector<JobOutput> results(jobs.size());
  std::size_t done = 0;
  const int threads = options.threads > 0 ? options.threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
  for (std::size_t k = 0; k < jobs.size(); ++k) {
    try {
      results[k] = run_job(jobs[k], config, stage);
    } catch (...) {
      results[k].error = std::current_exception();
    }
#pragma omp critical(tacit_progress)
    {
      ++done;
      if (options.progress) options.progress(done, jobs.size());
    }
  }

  // First failure in job order, independent of scheduling.
  for (const auto& r : results) {
    if (r.error) {
      fs::remove_all(stage, ec);
      std::rethrow_exception(r.error);
    }
  }

  BuildResult result;
  nlohmann::json files = nlohmann::json::array(), puzzles = nlohmann::json::array();
  std::size_t pngs = 0;
  for (std::size_t k = 0; k < jobs.size(); ++k) {
    for (const auto& [p, h] : results[k].files) {
      files.push_back({{"path", p}, {"sha256", h}});
      pngs += p.ends_with(".png");
    }
    puzzles.push_back(results[k].entry);
    GateTally& g = result.gates[jobs[k].task_id];
    const GateTally& t = results[k].tally;
    g.solutions += t.solutions;
    g.solutions_passed += t.solutions_passed;
    g.distractors += t.distractors;
    g.distractors_failed += t.distractors_failed;
    g.diagnosable += t.diagnosable;
    g.diagnosis_matched += t.diagnosis_matched;
    g.max_distractor_ssim = std::max(g.max_distractor_ssim, t.max_distractor_ssim);
  }
  nlohmann::json gates = nlohmann::json::object();
  for (const auto& [id, g] : result.gates) {
    nlohmann::json j = {{"solutions", g.solutions},
                        {"solutions_passed", g.solutions_passed},
                        {"distractors", g.distractors},
                        {"distractors_failed", g.distractors_failed},
                        {"diagnosable", g.diagnosable},
                        {"diagnosis_matched", g.diagnosis_matched}};
    if (g.max_distractor_ssim >= 0) j["max_distractor_ssim"] = g.max_distractor_ssim;
    gates[std::string(task_descriptor(id).name)] = j;
  }

  move_tree(stage, out);
  fs::remove_all(stage, ec);

  const std::size_t n = jobs.size();
  result.manifest = {{"format", kManifestFormat},
                     {"naming", kNaming},
                     {"config", config.to_json()},
                     {"counts",
                      {{"puzzles", n},
                       {"png_files", pngs},
                       {"png_per_resolution", n * kImagesPerPuzzle},
                       {"metadata_files", n}}},
                     {"gates", gates},
                     {"puzzles", puzzles},
                     {"files", files},
                     {"digest", files_digest(files)}};
  write_json(out / "manifest.json", result.manifest);
  result.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return result;
}

LoadedPuzzle load_puzzle(const fs::path& root, const std::string& task, const std::string& difficulty,
                         std::uint64_t seed) {
  const TaskDescriptor& desc = task_by_name(task);
  const Difficulty d = parse_difficulty(difficulty);
  const fs::path cell = root / task_dir_name(desc.id) / std::string(to_string(d));
  if (!fs::is_directory(cell)) throw IoError("no such cell directory: " + cell.string());

  LoadedPuzzle out;
  out.metadata = read_json(cell / meta_name(seed));
  const nlohmann::json& m = out.metadata;
  try {
    if (m.at("task_name") != desc.name || m.at("difficulty") != difficulty || m.at("seed").get<std::uint64_t>() != seed) {
      throw ValidationError("metadata identity does not match its location (" + task + "/" + difficulty + "/" +
                            std::to_string(seed) + ")");
    }
    out.instance = generate_with(desc.id, d, params_from_json(m.at("params")), seed);
    nlohmann::json regenerated = out.instance.metadata();
    for (const auto& [key, value] : regenerated.items()) {
      if (!m.contains(key) || m.at(key) != value) {
        throw ValidationError("regeneration mismatch in '" + key + "' for " + task + "/" + difficulty + "/" +
                              std::to_string(seed));
      }
    }
    for (const auto& [res, names] : m.at("images").items()) {
      auto& paths = out.images[std::stoi(res)];
      for (const auto& name : names) {
        const fs::path p = cell / res / name.get<std::string>();
        if (!fs::exists(p)) throw IoError("missing image " + p.string());
        paths.push_back(p);
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("corrupt metadata " + (cell / meta_name(seed)).string() + ": " + e.what());
  }
  return out;
}

std::vector<std::string> audit_release(const fs::path& root) {
  const nlohmann::json manifest = read_json(root / "manifest.json");
  std::vector<std::string> bad;
  for (const auto& f : manifest.at("files")) {
    const std::string rel = f.at("path");
    std::string actual;
    try {
      actual = sha256_hex(read_bytes(root / rel));
    } catch (const IoError&) {
      actual = "missing";
    }
    if (actual != f.at("sha256")) bad.push_back(rel);
  }
  if (files_digest(manifest.at("files")) != manifest.at("digest")) bad.push_back("manifest.json#digest");
  return bad;
}

}  // namespace tacit::dataset
