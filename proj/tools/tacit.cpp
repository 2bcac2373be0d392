// tacit: generate puzzles, build releases, verify candidates, score both tracks.
//
// Exit codes: 0 ok, 1 candidate rejected (verify), 2 invalid input,
// 3 I/O error, 4 release gate failure, 70 internal error.

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>

#include "tacit/core/errors.hpp"
#include "tacit/core/io.hpp"
#include "tacit/core/registry.hpp"
#include "tacit/dataset/dataset.hpp"
#include "tacit/harness/harness.hpp"
#include "tacit/scene/png.hpp"
#include "tacit/scene/svg.hpp"

namespace fs = std::filesystem;
using namespace tacit;

namespace {

enum Exit { kOk = 0, kRejected = 1, kInvalid = 2, kIo = 3, kGate = 4, kInternal = 70 };

const TaskDescriptor& find_task(const std::string& s) {
  if (!s.empty() && std::all_of(s.begin(), s.end(), ::isdigit)) return task_descriptor(std::stoi(s));
  return task_by_name(s);
}

void print_report(const nlohmann::json& report) {
  for (const auto& [track, t] : report.at("overall").items()) {
    std::printf("%s overall: %zu/%zu = %.4f\n", track.c_str(), t.at("correct").get<std::size_t>(),
                t.at("n").get<std::size_t>(), t.at("accuracy").get<double>());
  }
  std::printf("%-20s %10s %10s %8s\n", "task", "track1", "track2", "gap");
  for (const auto& [task, t] : report.at("per_task").items()) {
    auto acc = [&](const char* k) {
      return t.contains(k) ? std::to_string(t.at(k).at("accuracy").get<double>()).substr(0, 6) : std::string("-");
    };
    const std::string gap = t.contains("gap") ? std::to_string(t.at("gap").get<double>()).substr(0, 7) : "-";
    std::printf("%-20s %10s %10s %8s\n", task.c_str(), acc("track1").c_str(), acc("track2").c_str(), gap.c_str());
  }
  for (const auto& w : report.at("warnings")) std::fprintf(stderr, "warning: %s\n", w.get<std::string>().c_str());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Visual reasoning puzzle generator, release builder and scorer"};
  app.require_subcommand(1);

  // generate
  auto* gen = app.add_subcommand("generate", "Generate one puzzle to files");
  std::string g_task, g_diff = "easy";
  std::optional<std::uint64_t> g_seed, g_index;
  std::uint64_t g_global = kDefaultGlobalSeed;
  std::vector<int> g_res = {512};
  fs::path g_out = ".";
  bool g_svg = false;
  gen->add_option("--task", g_task, "Task name or id")->required();
  gen->add_option("--difficulty", g_diff, "easy | medium | hard");
  gen->add_option("--seed", g_seed, "Puzzle seed");
  gen->add_option("--index", g_index, "Derive the seed from (global seed, task, difficulty, index)");
  gen->add_option("--global-seed", g_global);
  gen->add_option("--res", g_res, "Resolutions (512, 1024, 2048)");
  gen->add_option("--out", g_out, "Output directory");
  gen->add_flag("--svg", g_svg, "Also write SVG scenes");

  // build
  auto* build = app.add_subcommand("build", "Build a release from a config");
  fs::path b_config, b_out;
  std::optional<int> b_ppc;
  std::vector<int> b_res;
  int b_threads = 0;
  bool b_quiet = false;
  build->add_option("--config", b_config)->required();
  build->add_option("--out", b_out, "Output root (default: config 'output')");
  build->add_option("--puzzles-per-cell", b_ppc);
  build->add_option("--resolutions", b_res);
  build->add_option("--threads", b_threads);
  build->add_flag("--quiet", b_quiet);

  // verify
  auto* ver = app.add_subcommand("verify", "Verify a candidate image against a release puzzle");
  fs::path v_release, v_candidate;
  std::string v_task, v_diff;
  std::uint64_t v_seed = 0;
  ver->add_option("--release", v_release)->required();
  ver->add_option("--task", v_task)->required();
  ver->add_option("--difficulty", v_diff)->required();
  ver->add_option("--seed", v_seed)->required();
  ver->add_option("--candidate", v_candidate)->required();

  // assemble-track2
  auto* asm2 = app.add_subcommand("assemble-track2", "Shuffle candidates and write the Track-2 answer key");
  fs::path a_release, a_out;
  std::optional<std::uint64_t> a_shuffle;
  std::optional<int> a_res;
  asm2->add_option("--release", a_release)->required();
  asm2->add_option("--shuffle-seed", a_shuffle);
  asm2->add_option("--res", a_res);
  asm2->add_option("--out", a_out)->required();

  // score-track1
  auto* s1 = app.add_subcommand("score-track1", "Verify a directory of submitted solution images");
  fs::path s1_release, s1_sub, s1_report;
  harness::Track1Options s1_opt;
  s1->add_option("--release", s1_release)->required();
  s1->add_option("--submission", s1_sub)->required();
  s1->add_option("--report", s1_report)->required();
  s1->add_flag("--skip-unparseable", s1_opt.skip_unparseable, "Leave stray file names out of the denominator");
  s1->add_option("--threads", s1_opt.threads);

  // score-track2
  auto* s2 = app.add_subcommand("score-track2", "Score multiple-choice selections against the key");
  fs::path s2_key, s2_sub, s2_report;
  s2->add_option("--key", s2_key)->required();
  s2->add_option("--submission", s2_sub)->required();
  s2->add_option("--report", s2_report)->required();

  // report
  auto* rep = app.add_subcommand("report", "Merge score fragments into a report");
  std::vector<fs::path> r_frags;
  fs::path r_out;
  rep->add_option("fragments", r_frags)->required();
  rep->add_option("--out", r_out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInvalid;
  }

  try {
    if (*gen) {
      const TaskDescriptor& task = find_task(g_task);
      const Difficulty d = parse_difficulty(g_diff);
      if (g_seed.has_value() == g_index.has_value()) throw ValidationError("give exactly one of --seed, --index");
      const std::uint64_t seed = g_seed ? *g_seed : derive_seed(g_global, task.id, d, *g_index);
      const PuzzleInstance inst = generate(task.id, d, seed);
      const std::string stem = std::string(task.name) + "_" + g_diff + "_" + std::to_string(seed);
      for (int res : g_res) {
        if (!is_canonical_resolution(res)) throw ValidationError("resolution must be 512, 1024 or 2048");
        const fs::path dir = g_out / std::to_string(res);
        write_png(dir / (stem + "_puzzle.png"), rasterize(inst.puzzle, res));
        write_png(dir / (stem + "_solution.png"), rasterize(inst.solution, res));
        for (std::size_t i = 0; i < inst.distractors.size(); ++i) {
          write_png(dir / (stem + "_distractor_" + std::to_string(i) + ".png"), rasterize(inst.distractors[i].scene, res));
        }
      }
      if (g_svg) {
        write_text(g_out / (stem + "_puzzle.svg"), emit_svg(inst.puzzle));
        write_text(g_out / (stem + "_solution.svg"), emit_svg(inst.solution));
      }
      write_json(g_out / (stem + "_meta.json"), inst.metadata());
      std::printf("%s\n", stem.c_str());
    } else if (*build) {
      dataset::ReleaseConfig config = dataset::load_config(b_config);
      if (b_ppc) config.puzzles_per_cell = *b_ppc;
      if (!b_res.empty()) config.resolutions = b_res;
      fs::path out = b_out.empty() ? config.output : b_out;
      if (out.empty()) throw ValidationError("no output directory (--out or config 'output')");
      dataset::BuildOptions opt;
      opt.threads = b_threads;
      if (!b_quiet) {
        opt.progress = [](std::size_t done, std::size_t total) {
          if (done % 10 == 0 || done == total) std::fprintf(stderr, "\r%zu/%zu puzzles", done, total);
          if (done == total) std::fprintf(stderr, "\n");
        };
      }
      const auto result = dataset::build_release(config, out, opt);
      const auto& c = result.manifest.at("counts");
      std::printf("puzzles %zu, png %zu, digest %s, %.1fs\n", c.at("puzzles").get<std::size_t>(),
                  c.at("png_files").get<std::size_t>(), result.manifest.at("digest").get<std::string>().c_str(),
                  result.seconds);
    } else if (*ver) {
      const auto loaded = dataset::load_puzzle(v_release, v_task, v_diff, v_seed);
      const RasterImage img = read_png(v_candidate);
      const VerificationResult r = verify(loaded.instance, img);
      nlohmann::json out = {{"passed", r.passed}, {"reason", r.reason}, {"details", r.details}};
      std::printf("%s\n", out.dump(2).c_str());
      return r.passed ? kOk : kRejected;
    } else if (*asm2) {
      const auto key = harness::assemble_track2(a_release, a_shuffle, a_res);
      write_json(a_out, key);
      for (const auto& w : key.at("warnings")) std::fprintf(stderr, "warning: %s\n", w.get<std::string>().c_str());
      std::printf("%zu puzzles, shuffle seed %llu\n", key.at("puzzles").size(),
                  static_cast<unsigned long long>(key.at("shuffle_seed").get<std::uint64_t>()));
    } else if (*s1) {
      const auto frag = harness::score_track1(s1_release, s1_sub, s1_opt);
      write_json(s1_report, frag);
      print_report(harness::aggregate({frag}));
    } else if (*s2) {
      const auto frag = harness::score_track2(read_json(s2_key), read_json(s2_sub));
      write_json(s2_report, frag);
      print_report(harness::aggregate({frag}));
    } else if (*rep) {
      std::vector<nlohmann::json> frags;
      for (const auto& f : r_frags) frags.push_back(read_json(f));
      const auto report = harness::aggregate(frags);
      if (!r_out.empty()) write_json(r_out, report);
      print_report(report);
    }
  } catch (const ValidationError& e) {
    std::fprintf(stderr, "invalid input: %s\n", e.what());
    return kInvalid;
  } catch (const IoError& e) {
    std::fprintf(stderr, "i/o error: %s\n", e.what());
    return kIo;
  } catch (const GateError& e) {
    std::fprintf(stderr, "release gate failed: %s\n", e.what());
    return kGate;
  } catch (const std::filesystem::filesystem_error& e) {
    std::fprintf(stderr, "i/o error: %s\n", e.what());
    return kIo;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kInternal;
  }
  return kOk;
}
