#include "tacit/harness/harness.hpp"

#include <algorithm>
#include <map>
#include <set>

#include <omp.h>

#include "tacit/core/errors.hpp"
#include "tacit/core/io.hpp"
#include "tacit/core/registry.hpp"
#include "tacit/dataset/dataset.hpp"
#include "tacit/scene/png.hpp"

namespace tacit::harness {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kFragmentFormat = "tacit-fragment/1";
constexpr const char* kKeyFormat = "tacit-track2-key/1";
constexpr const char* kReportFormat = "tacit-report/1";

json load_manifest(const fs::path& release) {
  const fs::path p = release / "manifest.json";
  if (!fs::exists(p)) throw IoError("no manifest.json under " + release.string());
  return read_json(p);
}

json record(const std::string& id, const std::string& task, const std::string& difficulty, bool correct) {
  json r = {{"puzzle_id", id}, {"task", task}, {"difficulty", difficulty}, {"correct", correct}};
  if (!task.empty()) r["domain"] = std::string(to_string(task_by_name(task).domain));
  return r;
}

}  // namespace

std::string puzzle_id(const std::string& task, Difficulty d, std::uint64_t seed) {
  return task + "_" + std::string(to_string(d)) + "_" + std::to_string(seed);
}

std::optional<PuzzleRef> parse_puzzle_id(std::string_view text) {
  if (text.ends_with(".png")) text.remove_suffix(4);
  const auto last = text.rfind('_');
  if (last == std::string_view::npos || last + 1 == text.size()) return std::nullopt;
  const auto mid = text.rfind('_', last - 1);
  if (mid == std::string_view::npos || mid == 0) return std::nullopt;
  const std::string_view seed = text.substr(last + 1);
  if (seed.size() > 20 || !std::all_of(seed.begin(), seed.end(), [](char c) { return c >= '0' && c <= '9'; })) {
    return std::nullopt;
  }
  PuzzleRef ref;
  try {
    ref.seed = std::stoull(std::string(seed));
    ref.difficulty = parse_difficulty(text.substr(mid + 1, last - mid - 1));
    ref.task = std::string(task_by_name(text.substr(0, mid)).name);
  } catch (const std::exception&) {
    return std::nullopt;
  }
  return ref;
}

json score_track1(const fs::path& release, const fs::path& submission, const Track1Options& options) {
  const json manifest = load_manifest(release);
  if (!fs::is_directory(submission)) throw IoError("submission directory not found: " + submission.string());

  struct Item {
    std::string task, difficulty;
    std::uint64_t seed;
  };
  std::vector<Item> items;
  std::set<std::string> known;
  for (const auto& p : manifest.at("puzzles")) {
    items.push_back({p.at("task"), p.at("difficulty"), p.at("seed").get<std::uint64_t>()});
    known.insert(puzzle_id(items.back().task, parse_difficulty(items.back().difficulty), items.back().seed));
  }

  json warnings = json::array(), stray = json::array();
  std::vector<std::string> names;
  for (const auto& e : fs::directory_iterator(submission)) {
    if (e.is_regular_file()) names.push_back(e.path().filename().string());
  }
  std::sort(names.begin(), names.end());
  for (const auto& name : names) {
    const auto ref = name.ends_with(".png") ? parse_puzzle_id(name) : std::nullopt;
    if (!ref) {
      stray.push_back({{"file", name}, {"reason", "unparseable"}});
    } else if (!known.count(puzzle_id(ref->task, ref->difficulty, ref->seed))) {
      stray.push_back({{"file", name}, {"reason", "not in release"}});
    }
  }

  std::vector<json> records(items.size());
  const int threads = options.threads > 0 ? options.threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
  for (std::size_t i = 0; i < items.size(); ++i) {
    const Item& it = items[i];
    const std::string id = puzzle_id(it.task, parse_difficulty(it.difficulty), it.seed);
    json r = record(id, it.task, it.difficulty, false);
    const fs::path file = submission / (id + ".png");
    try {
      if (!fs::exists(file)) {
        r["reason"] = "missing";
      } else {
        const RasterImage candidate = decode_png(read_bytes(file));
        const auto loaded = dataset::load_puzzle(release, it.task, it.difficulty, it.seed);
        const VerificationResult v = verify(loaded.instance, candidate);
        r["correct"] = v.passed;
        if (!v.passed) r["reason"] = v.reason;
        if (!v.diagnosis().empty()) r["diagnosis"] = v.diagnosis();
      }
    } catch (const std::exception& e) {
      r["reason"] = std::string("error: ") + e.what();
    }
    records[i] = std::move(r);
  }

  json recs = json::array();
  for (auto& r : records) recs.push_back(std::move(r));
  if (!options.skip_unparseable) {
    for (const auto& s : stray) {
      json r = record(s.at("file"), "", "", false);
      r["reason"] = s.at("reason");
      recs.push_back(r);
    }
  }
  if (!stray.empty()) {
    warnings.push_back(std::to_string(stray.size()) + " submission file(s) did not name a release puzzle" +
                       (options.skip_unparseable ? " (excluded)" : " (scored as failures)"));
  }
  return {{"format", kFragmentFormat}, {"track", 1}, {"records", recs}, {"stray", stray}, {"warnings", warnings}};
}

std::uint64_t default_shuffle_seed(std::uint64_t global_seed) { return mix64(global_seed ^ 0x7261636b32ULL); }

json assemble_track2(const fs::path& release, std::optional<std::uint64_t> shuffle_seed, std::optional<int> resolution) {
  const json manifest = load_manifest(release);
  const json& config = manifest.at("config");
  const auto built = config.at("resolutions").get<std::vector<int>>();
  json warnings = json::array();
  int res = resolution.value_or(kDefaultTrack2Resolution);
  if (std::find(built.begin(), built.end(), res) == built.end()) {
    if (resolution) throw ValidationError("release has no " + std::to_string(res) + " px images");
    res = built.at(0);
    warnings.push_back("release has no 1024 px images; using " + std::to_string(res));
  }
  const std::uint64_t sseed = shuffle_seed.value_or(default_shuffle_seed(config.at("global_seed").get<std::uint64_t>()));

  json puzzles = json::array();
  for (const auto& p : manifest.at("puzzles")) {
    const std::string task = p.at("task"), diff = p.at("difficulty");
    const auto seed = p.at("seed").get<std::uint64_t>();
    const fs::path cell =
        fs::path(dataset::task_dir_name(task_by_name(task).id)) / diff;
    const json meta = read_json(release / cell / dataset::meta_name(seed));

    std::array<int, kCandidates> order{0, 1, 2, 3, 4};  // 0 is the solution
    Rng rng(mix64(sseed ^ mix64(seed)));
    rng.shuffle(order);
    json candidates = json::array(), violations = json::array();
    int correct = -1;
    for (int slot = 0; slot < kCandidates; ++slot) {
      const int k = order[slot];
      const fs::path dir = cell / std::to_string(res);
      if (k == 0) {
        correct = slot;
        candidates.push_back((dir / dataset::solution_png(seed)).generic_string());
        violations.push_back("");
      } else {
        candidates.push_back((dir / dataset::distractor_png(seed, k - 1)).generic_string());
        violations.push_back(meta.at("distractors").at(k - 1).at("violation"));
      }
    }
    puzzles.push_back({{"puzzle_id", puzzle_id(task, parse_difficulty(diff), seed)},
                       {"task", task},
                       {"difficulty", diff},
                       {"seed", seed},
                       {"candidates", candidates},
                       {"violations", violations},
                       {"correct_index", correct}});
  }
  return {{"format", kKeyFormat},
          {"shuffle_seed", sseed},
          {"resolution", res},
          {"release_digest", manifest.at("digest")},
          {"puzzles", puzzles},
          {"warnings", warnings}};
}

std::vector<std::string> validate_track2_submission(const json& doc) {
  static const std::vector<std::string> fields = {"puzzle_id", "task", "difficulty", "correct_index", "selected_index"};
  std::vector<std::string> errors;
  if (!doc.is_object() || !doc.contains("records") || !doc.at("records").is_array()) {
    return {"document must be an object with a 'records' array"};
  }
  for (const auto& [key, _] : doc.items()) {
    if (key != "records" && key != "format") errors.push_back("unexpected top-level field '" + key + "'");
  }
  std::size_t i = 0;
  for (const auto& r : doc.at("records")) {
    const std::string at = "records[" + std::to_string(i++) + "]";
    if (!r.is_object()) {
      errors.push_back(at + ": not an object");
      continue;
    }
    for (const auto& f : fields) {
      if (!r.contains(f)) errors.push_back(at + ": missing field '" + f + "'");
    }
    for (const auto& [key, value] : r.items()) {
      if (std::find(fields.begin(), fields.end(), key) == fields.end()) {
        errors.push_back(at + ": unexpected field '" + key + "'");
      } else if (key.ends_with("_index") ? !value.is_number_integer() : !value.is_string()) {
        errors.push_back(at + ": field '" + key + "' has the wrong type");
      }
    }
  }
  return errors;
}

json score_track2(const json& key, const json& submission) {
  if (key.value("format", "") != kKeyFormat) throw ValidationError("not a Track-2 answer key");
  if (const auto errors = validate_track2_submission(submission); !errors.empty()) {
    std::string msg = "invalid Track-2 submission:";
    for (const auto& e : errors) msg += "\n  " + e;
    throw ValidationError(msg);
  }
  std::map<std::string, const json*> by_id;
  for (const auto& p : key.at("puzzles")) by_id[p.at("puzzle_id")] = &p;

  json warnings = json::array();
  std::map<std::string, const json*> chosen;
  for (const auto& r : submission.at("records")) {
    const std::string id = r.at("puzzle_id");
    const auto it = by_id.find(id);
    if (it == by_id.end()) {
      warnings.push_back("record for unknown puzzle '" + id + "' ignored");
      continue;
    }
    const json& p = *it->second;
    if (r.at("task") != p.at("task") || r.at("difficulty") != p.at("difficulty")) {
      throw ValidationError("record '" + id + "': task/difficulty disagree with the key");
    }
    if (r.at("correct_index") != p.at("correct_index")) {
      throw ValidationError("record '" + id + "': correct_index " + r.at("correct_index").dump() +
                            " does not match the key (" + p.at("correct_index").dump() + ")");
    }
    if (chosen.count(id)) warnings.push_back("duplicate record for '" + id + "'; last one kept");
    chosen[id] = &r;
  }

  json recs = json::array();
  for (const auto& p : key.at("puzzles")) {
    const std::string id = p.at("puzzle_id");
    json out = record(id, p.at("task"), p.at("difficulty"), false);
    out["correct_index"] = p.at("correct_index");
    const auto it = chosen.find(id);
    if (it == chosen.end()) {
      out["reason"] = "missing";
    } else {
      const int sel = it->second->at("selected_index");
      out["selected_index"] = sel;
      if (sel < 0 || sel >= kCandidates) {
        out["reason"] = "index out of range";
        warnings.push_back("record '" + id + "': selected_index out of range, counted wrong");
      } else if (sel == p.at("correct_index").get<int>()) {
        out["correct"] = true;
      } else {
        out["chosen_violation"] = p.at("violations").at(sel);
      }
    }
    recs.push_back(std::move(out));
  }
  return {{"format", kFragmentFormat}, {"track", 2}, {"records", recs}, {"warnings", warnings}};
}

namespace {

struct Tally {
  std::size_t n = 0, correct = 0;
  void add(bool ok) {
    ++n;
    correct += ok;
  }
  double accuracy() const { return n ? static_cast<double>(correct) / static_cast<double>(n) : 0.0; }
  json to_json() const { return {{"n", n}, {"correct", correct}, {"accuracy", accuracy()}}; }
};

std::string track_key(int t) { return "track" + std::to_string(t); }

}  // namespace

json aggregate(const std::vector<json>& fragments) {
  if (fragments.empty()) throw ValidationError("aggregate needs at least one fragment");
  std::map<int, Tally> overall;
  std::map<std::string, std::map<int, Tally>> per_task;
  std::map<std::string, std::map<std::string, std::map<int, Tally>>> per_diff;
  std::map<std::string, std::map<std::string, std::size_t>> confusion;
  json warnings = json::array();

  for (const auto& f : fragments) {
    if (f.value("format", "") != kFragmentFormat) throw ValidationError("not a score fragment");
    const int track = f.at("track");
    if (track != 1 && track != 2) throw ValidationError("fragment track must be 1 or 2");
    for (const auto& w : f.value("warnings", json::array())) warnings.push_back(w);
    for (const auto& r : f.at("records")) {
      const bool ok = r.at("correct");
      overall[track].add(ok);
      const std::string task = r.value("task", "");
      if (task.empty()) continue;  // stray file: overall only
      per_task[task][track].add(ok);
      per_diff[task][r.at("difficulty")][track].add(ok);
      if (track == 2 && r.contains("chosen_violation")) ++confusion[task][r.at("chosen_violation")];
    }
  }

  json tasks = json::object();
  for (const auto& [task, tracks] : per_task) {
    json t = json::object();
    for (const auto& [track, tally] : tracks) t[track_key(track)] = tally.to_json();
    if (tracks.count(1) && tracks.count(2)) t["gap"] = tracks.at(2).accuracy() - tracks.at(1).accuracy();
    tasks[task] = t;
  }

  json domains = json::object();
  for (Domain d : kDomains) {
    const std::string name(to_string(d));
    json dj = json::object();
    std::map<int, double> mean;
    for (int track : {1, 2}) {
      double sum = 0;
      int members = 0;
      json used = json::array();
      for (const auto& [task, tracks] : per_task) {
        if (task_by_name(task).domain != d || !tracks.count(track)) continue;
        sum += tracks.at(track).accuracy();
        ++members;
        used.push_back(task);
      }
      if (members == 0) continue;
      mean[track] = sum / members;
      dj[track_key(track)] = {{"accuracy", mean[track]}, {"tasks", used}};
    }
    if (mean.empty()) {
      warnings.push_back("domain '" + name + "' has no scored tasks; omitted");
      continue;
    }
    if (mean.count(1) && mean.count(2)) dj["gap"] = mean[2] - mean[1];
    domains[name] = dj;
  }

  json diffs = json::object();
  for (const auto& [task, levels] : per_diff) {
    for (const auto& [level, tracks] : levels) {
      for (const auto& [track, tally] : tracks) diffs[task][level][track_key(track)] = tally.to_json();
    }
  }
  json overall_j = json::object();
  for (const auto& [track, tally] : overall) overall_j[track_key(track)] = tally.to_json();

  return {{"format", kReportFormat}, {"overall", overall_j}, {"per_task", tasks},     {"per_domain", domains},
          {"per_difficulty", diffs}, {"confusion", confusion}, {"warnings", warnings}};
}

}  // namespace tacit::harness
