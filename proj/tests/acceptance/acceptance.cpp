// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fail.
//
//   acceptance --work DIR
//
// Builds the desk release twice under DIR and checks the results with
// oracles written here, independent of the library's own solvers.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tacit/core/io.hpp"
#include "tacit/core/registry.hpp"
#include "tacit/core/rng.hpp"
#include "tacit/dataset/dataset.hpp"
#include "tacit/harness/harness.hpp"
#include "tacit/scene/png.hpp"
#include "tacit/scene/raster.hpp"
#include "tacit/tasks/cellular.hpp"
#include "tacit/vision/vision.hpp"

using namespace tacit;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

// Pinned tolerances.
constexpr double kDeskSeconds = 300;       // desk build budget
constexpr double kDiagnosisRate = 0.95;    // per diagnosable task
constexpr double kRandomLow = 0.16, kRandomHigh = 0.24;
constexpr int kRandomRuns = 10, kRandomRunsInBand = 9;
constexpr std::uint64_t kTrack2Shuffles = 4;
constexpr double kSelfSsimTol = 1e-9;
constexpr double kRavenGate = 0.997, kIsoRecGate = 0.99999;
constexpr double kExact = 1e-12;           // aggregate arithmetic

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Context {
  fs::path work, desk, desk_b;
  dataset::ReleaseConfig desk_config;
  dataset::BuildResult a, b;
  // Filled by the distractor sweep, reused by the SSIM criterion.
  std::map<std::string, double> max_ssim;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

json puzzles_of(const Context& ctx, const std::string& task) {
  json out = json::array();
  for (const auto& p : ctx.a.manifest["puzzles"])
    if (p["task"] == task) out.push_back(p);
  return out;
}

json structure_of(const Context& ctx, const json& p) {
  const auto& desc = task_by_name(p["task"].get<std::string>());
  const fs::path meta = ctx.desk / dataset::task_dir_name(desc.id) / p["difficulty"].get<std::string>() /
                        dataset::meta_name(p["seed"].get<std::uint64_t>());
  return read_json(meta).at("structure");
}

dataset::LoadedPuzzle load(const Context& ctx, const json& p) {
  return dataset::load_puzzle(ctx.desk, p["task"], p["difficulty"], p["seed"]);
}

// ---------------------------------------------------------------- oracles

// Row-major Latin-square backtracking over the constraint JSON. Each
// constraint is checked as soon as it is decidable; stops at `limit`.
long long count_logic_solutions(const json& s, long long limit) {
  const int n = s["n"];
  std::vector<int> cls(n);
  for (int i = 0; i < n; ++i) cls[i] = s["symbols"][i]["shape_class"];
  std::vector<std::vector<int>> g(n, std::vector<int>(n, -1));
  std::map<std::pair<int, int>, int> given;
  for (const auto& x : s["givens"]) given[{x[0], x[1]}] = x[2];
  const json& cons = s["constraints"];

  auto consistent = [&](int r, int c) {
    const int v = g[r][c];
    for (const auto& k : cons) {
      const std::string type = k["type"];
      if (type == "exclusion") {
        if (k["cell"][0] == r && k["cell"][1] == c && k["symbol"] == v) return false;
      } else if (type == "placement") {
        if (k["symbol"] != v) continue;
        const bool row = k["axis"] == "row";
        const int line = k["line"], pivot = k["pivot"];
        if ((row ? r : c) != line) continue;
        const int pos = row ? c : r;
        if (k["side"] == "before" ? !(pos < pivot) : !(pos > pivot)) return false;
      } else {
        const int ar = k["a"][0], ac = k["a"][1], br = k["b"][0], bc = k["b"][1];
        const bool touches = (ar == r && ac == c) || (br == r && bc == c);
        if (!touches || g[ar][ac] < 0 || g[br][bc] < 0) continue;
        const bool same = cls[g[ar][ac]] == cls[g[br][bc]];
        if (same != (type == "adjacent_same")) return false;
      }
    }
    return true;
  };

  long long found = 0;
  std::function<void(int)> go = [&](int k) {
    if (found >= limit) return;
    if (k == n * n) {
      ++found;
      return;
    }
    const int r = k / n, c = k % n;
    for (int v = 0; v < n; ++v) {
      if (auto it = given.find({r, c}); it != given.end() && it->second != v) continue;
      bool ok = true;
      for (int i = 0; i < c && ok; ++i) ok = g[r][i] != v;
      for (int i = 0; i < r && ok; ++i) ok = g[i][c] != v;
      if (!ok) continue;
      g[r][c] = v;
      if (consistent(r, c)) go(k + 1);
      g[r][c] = -1;
    }
  };
  go(0);
  return found;
}

long long count_latin(int n) {
  return count_logic_solutions(json{{"n", n},
                                    {"symbols", json(std::vector<json>(n, json{{"shape_class", 0}}))},
                                    {"givens", json::array()},
                                    {"constraints", json::array()}},
                               1LL << 40);
}

// One synchronous step of the outer-totalistic rule on a torus.
std::vector<int> ca_step(const std::vector<int>& g, int n, int states, const std::vector<int>& table,
                         std::vector<bool>* seen = nullptr) {
  std::vector<int> out(g.size());
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      int sum = 0;
      for (int dr = -1; dr <= 1; ++dr)
        for (int dc = -1; dc <= 1; ++dc)
          if (dr || dc) sum += g[((r + dr + n) % n) * n + (c + dc + n) % n];
      const int entry = g[r * n + c] * states + sum % states;
      if (seen) (*seen)[entry] = true;
      out[r * n + c] = table[entry];
    }
  }
  return out;
}

using Adj = std::vector<std::vector<bool>>;

Adj adjacency(const json& g) {
  const int n = g["n"];
  Adj a(n, std::vector<bool>(n, false));
  for (const auto& e : g["edges"]) a[e[0]][e[1]] = a[e[1]][e[0]] = true;
  return a;
}

// Vertex-by-vertex backtracking with degree and adjacency consistency.
bool isomorphic(const Adj& a, const Adj& b) {
  const int n = static_cast<int>(a.size());
  if (static_cast<int>(b.size()) != n) return false;
  std::vector<int> da(n), db(n);
  for (int i = 0; i < n; ++i) {
    da[i] = static_cast<int>(std::count(a[i].begin(), a[i].end(), true));
    db[i] = static_cast<int>(std::count(b[i].begin(), b[i].end(), true));
  }
  std::vector<int> map(n, -1);
  std::vector<bool> used(n, false);
  std::function<bool(int)> go = [&](int u) {
    if (u == n) return true;
    for (int v = 0; v < n; ++v) {
      if (used[v] || da[u] != db[v]) continue;
      bool ok = true;
      for (int w = 0; w < u && ok; ++w) ok = a[u][w] == b[v][map[w]];
      if (!ok) continue;
      map[u] = v;
      used[v] = true;
      if (go(u + 1)) return true;
      used[v] = false;
    }
    map[u] = -1;
    return false;
  };
  return go(0);
}

// ---------------------------------------------------------------- criteria

Outcome c1_round_trip(Context& ctx) {
  ctx.a = dataset::build_release(ctx.desk_config, ctx.desk);
  std::size_t sol = 0, passed = 0;
  for (const auto& [id, g] : ctx.a.gates) {
    sol += g.solutions;
    passed += g.solutions_passed;
  }
  // Track-1 oracle: submit every stored solution image under its puzzle id.
  const fs::path sub = ctx.work / "track1_oracle";
  fs::remove_all(sub);
  fs::create_directories(sub);
  for (const auto& p : ctx.a.manifest["puzzles"]) {
    const auto loaded = load(ctx, p);
    const std::string id =
        harness::puzzle_id(p["task"], parse_difficulty(p["difficulty"].get<std::string>()), p["seed"]);
    fs::copy_file(loaded.images.at(512).at(1), sub / (id + ".png"));
  }
  const json f = harness::score_track1(ctx.desk, sub);
  std::size_t n = 0, ok = 0;
  for (const auto& r : f["records"]) {
    ++n;
    ok += r["correct"].get<bool>();
  }
  const std::size_t puzzles = ctx.a.manifest["puzzles"].size();
  return {puzzles == 150 && sol == 150 && passed == sol && n == 150 && ok == n && ctx.a.seconds < kDeskSeconds,
          fmt("%zu puzzles; build gate %zu/%zu solutions; track-1 oracle %zu/%zu; build %.1fs (< %.0fs)", puzzles,
              passed, sol, ok, n, ctx.a.seconds, kDeskSeconds)};
}

Outcome c2_distractors(Context& ctx) {
  std::size_t total = 0, failed = 0;
  std::map<int, std::pair<std::size_t, std::size_t>> diag;  // task -> matched, diagnosable
  for (const auto& p : ctx.a.manifest["puzzles"]) {
    const auto loaded = load(ctx, p);
    const auto& imgs = loaded.images.at(512);
    for (std::size_t i = 0; i < loaded.instance.distractors.size(); ++i) {
      const auto v = verify(loaded.instance, read_png(imgs.at(2 + i)));
      ++total;
      failed += !v.passed;
      if (v.details.contains("ssim")) {
        double& m = ctx.max_ssim[p["task"]];
        m = std::max(m, v.details["ssim"].get<double>());
      }
      const std::string& expect = loaded.instance.distractors[i].expected_diagnosis;
      if (!expect.empty()) {
        auto& [matched, n] = diag[loaded.instance.task_id];
        ++n;
        matched += v.diagnosis() == expect;
      }
    }
  }
  bool ok = total == 600 && failed == total;
  std::string rates;
  for (int id : {1, 3, 4, 5, 6, 9}) {
    const auto [matched, n] = diag[id];
    const double rate = n ? static_cast<double>(matched) / static_cast<double>(n) : 0.0;
    ok = ok && n == 60 && rate >= kDiagnosisRate;
    rates += fmt(" t%d=%zu/%zu", id, matched, n);
  }
  return {ok, fmt("%zu/%zu rejected; diagnosis match (>= %.0f%%):", failed, total, 100 * kDiagnosisRate) + rates};
}

Outcome c3_determinism(Context& ctx) {
  ctx.b = dataset::build_release(ctx.desk_config, ctx.desk_b, {.threads = 1});
  const bool same = ctx.a.manifest["digest"] == ctx.b.manifest["digest"];
  std::map<std::string, std::string> sha;
  for (const auto& f : ctx.a.manifest["files"]) sha[f["path"]] = f["sha256"];
  // Regenerate each puzzle from its metadata alone; the re-rendered images
  // must hash to the stored ones.
  std::size_t regenerated = 0, identical = 0;
  for (const auto& p : ctx.a.manifest["puzzles"]) {
    const auto loaded = load(ctx, p);
    ++regenerated;
    const fs::path cell = fs::path(dataset::task_dir_name(loaded.instance.task_id)) / p["difficulty"].get<std::string>() / "512";
    const auto seed = p["seed"].get<std::uint64_t>();
    const bool puzzle = sha256_hex(encode_png(rasterize(loaded.instance.puzzle, 512))) ==
                        sha[(cell / dataset::puzzle_png(seed)).generic_string()];
    const bool solution = sha256_hex(encode_png(rasterize(loaded.instance.solution, 512))) ==
                          sha[(cell / dataset::solution_png(seed)).generic_string()];
    identical += puzzle && solution;
  }
  return {same && identical == regenerated && regenerated == 150,
          fmt("digest %s %s; %zu/%zu regenerated puzzles byte-identical", ctx.a.manifest["digest"].get<std::string>().substr(0, 16).c_str(),
              same ? "==" : "!=", identical, regenerated)};
}

Outcome c4_counts(Context& ctx) {
  std::size_t on_disk = 0;
  for (const auto& e : fs::recursive_directory_iterator(ctx.desk))
    on_disk += e.is_regular_file() && e.path().extension() == ".png";
  const auto& counts = ctx.a.manifest["counts"];
  const std::size_t desk_expect = 6 * 150 * ctx.desk_config.resolutions.size();

  const auto full = dataset::load_config(fs::path(TACIT_SOURCE_DIR) / "configs/release.yaml");
  const std::size_t puzzles = full.task_ids().size() * kDifficulties.size() * full.puzzles_per_cell;
  const std::size_t per_res = 6 * puzzles, total = per_res * full.resolutions.size();
  const bool ok = on_disk == 900 && desk_expect == 900 && counts["png_files"] == 900 && puzzles == 6000 &&
                  per_res == 36000 && total == 108000;
  return {ok, fmt("desk %zu PNGs on disk (manifest %zu); full profile %zu puzzles / %zu per resolution / %zu total",
                  on_disk, counts["png_files"].get<std::size_t>(), puzzles, per_res, total)};
}

Outcome c5_track2(Context& ctx) {
  // 150 desk puzzles under four independent candidate orders: 600 trials.
  const std::uint64_t base = harness::default_shuffle_seed(ctx.desk_config.global_seed);
  std::vector<json> keys;
  for (std::uint64_t k = 0; k < kTrack2Shuffles; ++k) {
    keys.push_back(harness::assemble_track2(ctx.desk, k == 0 ? base : mix64(base + k)));
  }
  std::size_t trials = 0;
  for (const auto& key : keys) trials += key["puzzles"].size();
  auto score = [&](const std::function<int(const json&)>& pick) {
    double ok = 0;
    for (const auto& key : keys) {
      json sub = {{"records", json::array()}};
      for (const auto& p : key["puzzles"]) {
        sub["records"].push_back({{"puzzle_id", p["puzzle_id"]},
                                  {"task", p["task"]},
                                  {"difficulty", p["difficulty"]},
                                  {"correct_index", p["correct_index"]},
                                  {"selected_index", pick(p)}});
      }
      const json f = harness::score_track2(key, sub);
      for (const auto& r : f["records"]) ok += r["correct"].get<bool>();
    }
    return ok / static_cast<double>(trials);
  };
  const double oracle = score([](const json& p) { return p["correct_index"].get<int>(); });
  int in_band = 0;
  std::string accs;
  for (int run = 0; run < kRandomRuns; ++run) {
    Rng rng(1000 + run);
    const double acc = score([&](const json&) { return rng.uniform_int(0, harness::kCandidates - 1); });
    in_band += acc >= kRandomLow && acc <= kRandomHigh;
    accs += fmt(" %.3f", acc);
  }
  return {trials == 600 && oracle == 1.0 && in_band >= kRandomRunsInBand,
          fmt("%zu trials @%dpx; oracle %.3f; random in [%.2f, %.2f] %d/%d:", trials,
              keys[0]["resolution"].get<int>(), oracle, kRandomLow, kRandomHigh, in_band, kRandomRuns) + accs};
}

Outcome c6_ssim(Context& ctx) {
  double worst = 0;
  int checked = 0;
  for (const auto& p : ctx.a.manifest["puzzles"]) {
    if (p["index"] != 0) continue;
    const auto loaded = load(ctx, p);
    for (const auto& path : loaded.images.at(512)) {
      const RasterImage img = read_png(path);
      worst = std::max(worst, std::abs(vision::ssim(img, img) - 1.0));
      ++checked;
    }
  }
  const double raven = ctx.max_ssim.count("raven") ? ctx.max_ssim["raven"] : 1.0;
  const double isorec = ctx.max_ssim.count("iso_reconstruction") ? ctx.max_ssim["iso_reconstruction"] : 1.0;
  const auto& gates = ctx.a.manifest["gates"];
  const double raven_gate = gates["raven"]["max_distractor_ssim"];
  const double isorec_gate = gates["iso_reconstruction"]["max_distractor_ssim"];
  const bool ok = worst <= kSelfSsimTol && raven < kRavenGate && raven_gate < kRavenGate && isorec < kIsoRecGate &&
                  isorec_gate < kIsoRecGate;
  return {ok, fmt("|ssim(x,x)-1| max %.2e over %d images; raven max %.5f (< %.3f); isorec max %.6f (< %.5f)",
                  worst, checked, raven, kRavenGate, isorec, kIsoRecGate)};
}

Outcome c7_logic(Context& ctx) {
  int unique = 0, n = 0;
  for (const auto& p : puzzles_of(ctx, "logic_grid")) {
    ++n;
    unique += count_logic_solutions(structure_of(ctx, p), 2) == 1;
  }
  const long long latin4 = count_latin(4);
  return {n == 15 && unique == n && latin4 == 576,
          fmt("%d/%d puzzles with exactly one solution; 4x4 Latin squares = %lld", unique, n, latin4)};
}

Outcome c8_cellular(Context& ctx) {
  Rng rng(8080);
  int oracle_ok = 0, compose_ok = 0;
  for (int t = 0; t < 100; ++t) {
    const int n = rng.uniform_int(3, 24), states = rng.uniform_int(2, 16), steps = rng.uniform_int(1, 6);
    ca::Grid g{n, std::vector<std::uint8_t>(n * n)};
    for (auto& c : g.cells) c = static_cast<std::uint8_t>(rng.uniform_int(0, states - 1));
    ca::Rule rule{states, std::vector<std::uint8_t>(states * states)};
    for (auto& v : rule.table) v = static_cast<std::uint8_t>(rng.uniform_int(0, states - 1));
    std::vector<int> cur(g.cells.begin(), g.cells.end()), table(rule.table.begin(), rule.table.end());
    for (int s = 0; s < steps; ++s) cur = ca_step(cur, n, states, table);
    const auto out = ca::simulate(g, rule, steps);
    oracle_ok += std::equal(cur.begin(), cur.end(), out.cells.begin(), out.cells.end());
  }
  for (int t = 0; t < 50; ++t) {
    const int n = rng.uniform_int(3, 24), states = rng.uniform_int(2, 16);
    const int a = rng.uniform_int(0, 6), b = rng.uniform_int(0, 6);
    ca::Grid g{n, std::vector<std::uint8_t>(n * n)};
    for (auto& c : g.cells) c = static_cast<std::uint8_t>(rng.uniform_int(0, states - 1));
    ca::Rule rule{states, std::vector<std::uint8_t>(states * states)};
    for (auto& v : rule.table) v = static_cast<std::uint8_t>(rng.uniform_int(0, states - 1));
    compose_ok += ca::simulate(g, rule, a + b) == ca::simulate(ca::simulate(g, rule, a), rule, b);
  }
  int covered = 0, inverse = 0;
  for (const auto& p : puzzles_of(ctx, "ca_inverse")) {
    ++inverse;
    const json s = structure_of(ctx, p);
    const int n = s["initial"]["n"], states = s["rule"]["states"];
    auto cur = s["initial"]["cells"].get<std::vector<int>>();
    const auto table = s["rule"]["table"].get<std::vector<int>>();
    std::vector<bool> seen(states * states, false);
    for (int k = 0; k < s["steps"].get<int>(); ++k) cur = ca_step(cur, n, states, table, &seen);
    covered += std::count(seen.begin(), seen.end(), true) == states * states &&
               cur == s["final"]["cells"].get<std::vector<int>>();
  }
  return {oracle_ok == 100 && compose_ok == 50 && inverse == 15 && covered == inverse,
          fmt("per-cell oracle %d/100; composition %d/50; inverse full coverage %d/%d", oracle_ok, compose_ok, covered,
              inverse)};
}

Outcome c9_graph(Context& ctx) {
  int colorings = 0, proper = 0;
  for (const auto& p : puzzles_of(ctx, "graph_coloring")) {
    ++colorings;
    const json s = structure_of(ctx, p);
    const auto col = s["solution"].get<std::vector<int>>();
    bool ok = static_cast<int>(col.size()) == s["n"].get<int>();
    for (const auto& e : s["edges"]) ok = ok && col[e[0]] != col[e[1]];
    ok = ok && static_cast<int>(std::set<int>(col.begin(), col.end()).size()) == s["k"].get<int>();
    proper += ok;
  }
  int pairs = 0, certified = 0, yes = 0;
  for (const auto& p : puzzles_of(ctx, "graph_isomorphism")) {
    ++pairs;
    const json s = structure_of(ctx, p);
    const Adj a = adjacency(s["g1"]), b = adjacency(s["g2"]);
    const int n = static_cast<int>(a.size());
    if (s["isomorphic"].get<bool>()) {
      ++yes;
      const auto w = s["witness"].get<std::vector<int>>();
      bool ok = static_cast<int>(w.size()) == n && std::set<int>(w.begin(), w.end()).size() == w.size();
      for (int u = 0; u < n && ok; ++u)
        for (int v = 0; v < n && ok; ++v) ok = a[u][v] == b[w[u]][w[v]];
      certified += ok;
    } else {
      certified += n <= 12 && !isomorphic(a, b);
    }
  }
  return {colorings == 15 && proper == colorings && pairs == 15 && certified == pairs,
          fmt("colorings proper with exactly k colors %d/%d; isomorphism answers certified %d/%d (%d by witness)",
              proper, colorings, certified, pairs, yes)};
}

Outcome c10_resolution(Context& ctx) {
  int sampled = 0, invariant = 0;
  for (const auto& p : ctx.a.manifest["puzzles"]) {
    if (p["index"] != 0) continue;
    ++sampled;
    const auto inst = load(ctx, p).instance;
    std::vector<Scene> scenes = {inst.solution};
    for (const auto& d : inst.distractors) scenes.push_back(d.scene);
    std::vector<std::string> first;
    bool same = true;
    for (int res : {512, 1024, 2048}) {
      std::vector<std::string> verdicts;
      for (const auto& s : scenes) {
        const auto v = verify(inst, rasterize(s, res), VerifyOptions{res});
        verdicts.push_back(v.passed ? "pass" : "fail:" + v.diagnosis());
      }
      if (first.empty()) first = verdicts;
      same = same && verdicts == first && first[0] == "pass";
    }
    invariant += same;
  }
  return {sampled == 30 && invariant == sampled,
          fmt("%d/%d puzzles (solution + 4 distractors) with identical verdicts at 512/1024/2048", invariant, sampled)};
}

Outcome c11_aggregate(Context&) {
  auto rec = [](const std::string& task, const char* diff, bool ok) {
    return json{{"puzzle_id", task + "_" + diff + "_1"}, {"task", task}, {"difficulty", diff}, {"correct", ok}};
  };
  // track 1: maze 3/4, graph_coloring 1/2, graph_isomorphism 0/2
  // track 2: maze 2/4, graph_coloring 2/2, graph_isomorphism 1/2
  json t1 = {{"format", "tacit-fragment/1"}, {"track", 1}, {"records", json::array()}};
  json t2 = {{"format", "tacit-fragment/1"}, {"track", 2}, {"records", json::array()}};
  for (bool ok : {true, true, true, false}) t1["records"].push_back(rec("maze", "easy", ok));
  for (bool ok : {true, false}) t1["records"].push_back(rec("graph_coloring", "hard", ok));
  for (bool ok : {false, false}) t1["records"].push_back(rec("graph_isomorphism", "medium", ok));
  for (bool ok : {true, false, true, false}) t2["records"].push_back(rec("maze", "easy", ok));
  for (bool ok : {true, true}) t2["records"].push_back(rec("graph_coloring", "hard", ok));
  for (bool ok : {true, false}) t2["records"].push_back(rec("graph_isomorphism", "medium", ok));
  const json r = harness::aggregate({t1, t2});

  const std::vector<std::pair<json::json_pointer, double>> expect = {
      {json::json_pointer("/per_task/maze/track1/accuracy"), 0.75},
      {json::json_pointer("/per_task/maze/track2/accuracy"), 0.5},
      {json::json_pointer("/per_task/maze/gap"), -0.25},
      {json::json_pointer("/per_task/graph_coloring/gap"), 0.5},
      {json::json_pointer("/per_task/graph_isomorphism/gap"), 0.5},
      // graph domain: mean of the two graph tasks, not the pooled rate
      {json::json_pointer("/per_domain/graph/track1/accuracy"), 0.25},
      {json::json_pointer("/per_domain/graph/track2/accuracy"), 0.75},
      {json::json_pointer("/per_domain/graph/gap"), 0.5},
      {json::json_pointer("/per_domain/spatial/gap"), -0.25},
      {json::json_pointer("/overall/track1/accuracy"), 0.5},
      {json::json_pointer("/overall/track2/accuracy"), 0.625},
  };
  int matched = 0;
  for (const auto& [ptr, value] : expect) matched += r.contains(ptr) && std::abs(r[ptr].get<double>() - value) <= kExact;
  return {matched == static_cast<int>(expect.size()),
          fmt("%d/%zu hand-computed per-task, per-domain and gap values reproduced (tol %.0e)", matched, expect.size(),
              kExact)};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria"};
  fs::path work = fs::temp_directory_path() / "tacit_acceptance";
  app.add_option("--work", work, "Scratch directory for the desk builds");
  CLI11_PARSE(app, argc, argv);

  Context ctx;
  ctx.work = work;
  ctx.desk = work / "desk";
  ctx.desk_b = work / "desk_b";
  fs::remove_all(ctx.desk);
  fs::remove_all(ctx.desk_b);
  ctx.desk_config = dataset::load_config(fs::path(TACIT_SOURCE_DIR) / "configs/desk.yaml");

  const std::vector<std::pair<const char*, Outcome (*)(Context&)>> criteria = {
      {"round-trip soundness", c1_round_trip},   {"distractor rejection", c2_distractors},
      {"determinism", c3_determinism},           {"count identities", c4_counts},
      {"track-2 baselines", c5_track2},          {"SSIM gates", c6_ssim},
      {"logic-grid uniqueness", c7_logic},       {"CA correctness", c8_cellular},
      {"graph ground truth", c9_graph},          {"resolution invariance", c10_resolution},
      {"cross-track reporting", c11_aggregate},
  };
  int passed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second(ctx);
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    passed += o.pass;
    std::printf("%s  C%02zu %-24s %s  [%.1fs]\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first,
                o.detail.c_str(), s);
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", passed, criteria.size());
  return passed == static_cast<int>(criteria.size()) ? 0 : 1;
}
