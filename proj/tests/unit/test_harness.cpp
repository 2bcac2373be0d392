#include <doctest.h>

#include <filesystem>

#include "tacit/core/errors.hpp"
#include "tacit/core/io.hpp"
#include "tacit/dataset/dataset.hpp"
#include "tacit/harness/harness.hpp"

using namespace tacit;
using namespace tacit::harness;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

json key_entry(const std::string& task, const std::string& diff, std::uint64_t seed, int correct) {
  json violations = json::array();
  for (int i = 0; i < kCandidates; ++i) violations.push_back(i == correct ? "" : "v" + std::to_string(i));
  return {{"puzzle_id", puzzle_id(task, parse_difficulty(diff), seed)},
          {"task", task},
          {"difficulty", diff},
          {"seed", seed},
          {"candidates", json::array()},
          {"violations", violations},
          {"correct_index", correct}};
}

json answer(const json& entry, int selected) {
  return {{"puzzle_id", entry["puzzle_id"]},
          {"task", entry["task"]},
          {"difficulty", entry["difficulty"]},
          {"correct_index", entry["correct_index"]},
          {"selected_index", selected}};
}

json synthetic_key() {
  json puzzles = json::array();
  puzzles.push_back(key_entry("maze", "easy", 1, 0));
  puzzles.push_back(key_entry("maze", "hard", 2, 3));
  puzzles.push_back(key_entry("unknot", "easy", 3, 4));
  return {{"format", "tacit-track2-key/1"}, {"puzzles", puzzles}};
}

json rec(const std::string& task, const std::string& diff, bool ok) {
  return {{"puzzle_id", task + "_" + diff + "_0"}, {"task", task}, {"difficulty", diff}, {"correct", ok}};
}

}  // namespace

TEST_CASE("puzzle ids") {
  CHECK(puzzle_id("graph_coloring", Difficulty::hard, 77) == "graph_coloring_hard_77");
  const auto r = parse_puzzle_id("graph_coloring_hard_77.png");
  REQUIRE(r);
  CHECK(r->task == "graph_coloring");
  CHECK(r->difficulty == Difficulty::hard);
  CHECK(r->seed == 77);
  CHECK(parse_puzzle_id("iso_reconstruction_medium_18446744073709551615"));
  for (const char* bad : {"maze_easy", "maze_easy_", "maze_easy_x1", "tetris_easy_1", "maze_extreme_1", "_easy_1",
                          "maze_easy_99999999999999999999999", ""}) {
    CAPTURE(bad);
    CHECK_FALSE(parse_puzzle_id(bad));
  }
}

TEST_CASE("track-2 submission validation names each problem") {
  CHECK(validate_track2_submission(json{{"records", json::array()}}).empty());
  CHECK(validate_track2_submission(json::array()).size() == 1);
  const json doc = {{"records",
                     {{{"puzzle_id", "maze_easy_1"}, {"task", "maze"}, {"difficulty", "easy"}, {"selected_index", "2"}},
                      {{"puzzle_id", "maze_easy_1"},
                       {"task", "maze"},
                       {"difficulty", "easy"},
                       {"correct_index", 0},
                       {"selected_index", 1},
                       {"confidence", 0.5}}}},
                    {"extra", 1}};
  const auto errors = validate_track2_submission(doc);
  CHECK(errors == std::vector<std::string>{"unexpected top-level field 'extra'",
                                           "records[0]: missing field 'correct_index'",
                                           "records[0]: field 'selected_index' has the wrong type",
                                           "records[1]: unexpected field 'confidence'"});
}

TEST_CASE("track-2 scoring") {
  const json key = synthetic_key();
  const auto& p = key["puzzles"];

  SUBCASE("oracle and wrong answers") {
    const json sub = {{"records", {answer(p[0], 0), answer(p[1], 1), answer(p[2], 4)}}};
    const json f = score_track2(key, sub);
    CHECK(f["track"] == 2);
    CHECK(f["records"][0]["correct"] == true);
    CHECK(f["records"][1]["correct"] == false);
    CHECK(f["records"][1]["chosen_violation"] == "v1");
    CHECK(f["records"][2]["correct"] == true);
  }
  SUBCASE("missing, duplicate, out of range, unknown") {
    json bad = answer(p[0], 2);
    bad["puzzle_id"] = "maze_easy_999";
    const json sub = {{"records", {answer(p[1], 0), answer(p[1], 3), answer(p[2], 7), bad}}};
    const json f = score_track2(key, sub);
    CHECK(f["records"][0]["reason"] == "missing");
    CHECK(f["records"][1]["correct"] == true);  // last duplicate wins
    CHECK(f["records"][2]["correct"] == false);
    CHECK(f["records"][2]["reason"] == "index out of range");
    CHECK(f["warnings"].size() == 3);
  }
  SUBCASE("disagreeing with the key is a validation error") {
    json wrong = answer(p[0], 0);
    wrong["correct_index"] = 2;
    CHECK_THROWS_AS(score_track2(key, json{{"records", {wrong}}}), ValidationError);
    json task = answer(p[0], 0);
    task["task"] = "raven";
    CHECK_THROWS_AS(score_track2(key, json{{"records", {task}}}), ValidationError);
    CHECK_THROWS_AS(score_track2(json{{"format", "x"}}, json{{"records", json::array()}}), ValidationError);
  }
}

TEST_CASE("aggregate against hand-computed figures") {
  // Track 1: maze 1/2, raven 1/1, ca_forward 0/2, stray 0/1.
  json t1 = {{"format", "tacit-fragment/1"},
             {"track", 1},
             {"records",
              {rec("maze", "easy", true), rec("maze", "hard", false), rec("raven", "easy", true),
               rec("ca_forward", "easy", false), rec("ca_forward", "medium", false),
               {{"puzzle_id", "junk.png"}, {"task", ""}, {"difficulty", ""}, {"correct", false}}}}};
  // Track 2: maze 2/2, raven 0/1, ca_forward 1/2.
  json wrong = rec("raven", "easy", false);
  wrong["chosen_violation"] = "wrong_color";
  json t2 = {{"format", "tacit-fragment/1"},
             {"track", 2},
             {"records",
              {rec("maze", "easy", true), rec("maze", "hard", true), wrong, rec("ca_forward", "easy", true),
               rec("ca_forward", "medium", false)}}};
  const json r = aggregate({t1, t2});

  CHECK(r["overall"]["track1"]["n"] == 6);
  CHECK(r["overall"]["track1"]["correct"] == 2);
  CHECK(r["overall"]["track2"]["correct"] == 3);
  CHECK(r["per_task"]["maze"]["track1"]["accuracy"].get<double>() == doctest::Approx(0.5));
  CHECK(r["per_task"]["maze"]["gap"].get<double>() == doctest::Approx(0.5));
  CHECK(r["per_task"]["raven"]["gap"].get<double>() == doctest::Approx(-1.0));
  // pattern = mean(raven, ca_forward): track1 (1 + 0)/2, track2 (0 + 0.5)/2.
  CHECK(r["per_domain"]["pattern"]["track1"]["accuracy"].get<double>() == doctest::Approx(0.5));
  CHECK(r["per_domain"]["pattern"]["track2"]["accuracy"].get<double>() == doctest::Approx(0.25));
  CHECK(r["per_domain"]["pattern"]["gap"].get<double>() == doctest::Approx(-0.25));
  CHECK(r["per_domain"]["spatial"]["track2"]["accuracy"].get<double>() == doctest::Approx(1.0));
  CHECK_FALSE(r["per_domain"].contains("graph"));
  CHECK(r["per_difficulty"]["ca_forward"]["medium"]["track2"]["n"] == 1);
  CHECK(r["confusion"]["raven"]["wrong_color"] == 1);
  CHECK(r["warnings"].size() == 4);  // logical, graph, topology, geometric omitted

  CHECK_THROWS_AS(aggregate({}), ValidationError);
  CHECK_THROWS_AS(aggregate({json{{"format", "nope"}}}), ValidationError);
}

TEST_CASE("track 1 and track 2 on a small release") {
  const fs::path rel = fs::temp_directory_path() / "tacit_test_harness_release";
  const fs::path sub = fs::temp_directory_path() / "tacit_test_harness_sub";
  fs::remove_all(rel);
  fs::remove_all(sub);
  auto config = dataset::parse_config("puzzles_per_cell: 2\nresolutions: [512]\ntasks: {maze: , unknot: }\n");
  const auto built = dataset::build_release(config, rel);
  const json& puzzles = built.manifest["puzzles"];
  REQUIRE(puzzles.size() == 12);

  // Oracle: every solution image under its puzzle id, one puzzle left out,
  // one distractor submitted in place of a solution, one stray file.
  fs::create_directories(sub);
  for (std::size_t i = 1; i < puzzles.size(); ++i) {
    const auto& p = puzzles[i];
    const auto loaded = dataset::load_puzzle(rel, p["task"], p["difficulty"], p["seed"]);
    const auto& imgs = loaded.images.at(512);
    const std::string id = puzzle_id(p["task"], parse_difficulty(p["difficulty"].get<std::string>()), p["seed"]);
    fs::copy_file(i == 1 ? imgs[2] : imgs[1], sub / (id + ".png"));
  }
  write_text(sub / "notes.png", "not a png");

  const json f1 = score_track1(rel, sub);
  REQUIRE(f1["records"].size() == 13);
  CHECK(f1["records"][0]["reason"] == "missing");
  CHECK(f1["records"][1]["correct"] == false);
  for (std::size_t i = 2; i < 12; ++i) CHECK(f1["records"][i]["correct"] == true);
  CHECK(f1["stray"].size() == 1);
  CHECK(score_track1(rel, sub, {.skip_unparseable = true})["records"].size() == 12);
  CHECK_THROWS_AS(score_track1(rel, sub / "nope"), IoError);
  CHECK_THROWS_AS(score_track1(sub, sub), IoError);

  const json key = assemble_track2(rel);
  CHECK(key["resolution"] == 512);
  CHECK(key["warnings"].size() == 1);
  CHECK(key["release_digest"] == built.manifest["digest"]);
  CHECK(assemble_track2(rel) == key);
  CHECK(assemble_track2(rel, 5)["shuffle_seed"] == 5);
  CHECK_THROWS_AS(assemble_track2(rel, {}, 1024), ValidationError);
  json oracle = {{"records", json::array()}};
  for (const auto& p : key["puzzles"]) {
    const int c = p["correct_index"];
    CHECK(p["violations"][c] == "");
    // The candidate at the key's index is the stored solution.
    CHECK(p["candidates"][c].get<std::string>().ends_with("_solution.png"));
    for (const auto& path : p["candidates"]) CHECK(fs::exists(rel / path.get<std::string>()));
    oracle["records"].push_back(answer(p, c));
  }
  const json f2 = score_track2(key, oracle);
  for (const auto& r : f2["records"]) CHECK(r["correct"] == true);
  const json report = aggregate({f1, f2});
  CHECK(report["overall"]["track2"]["accuracy"] == 1.0);
  CHECK(report["overall"]["track1"]["correct"] == 10);

  fs::remove_all(rel);
  fs::remove_all(sub);
}
