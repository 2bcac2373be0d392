#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <set>

#include "tacit/core/errors.hpp"
#include "tacit/core/io.hpp"
#include "tacit/dataset/dataset.hpp"
#include "tacit/scene/png.hpp"

using namespace tacit;
using namespace tacit::dataset;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("tacit_test_dataset_" + name);
  fs::remove_all(p);
  return p;
}

const char* kSmall = R"(
profile: test
global_seed: 9
puzzles_per_cell: 1
resolutions: [512]
tasks:
  maze:
  logic_grid:
)";

}  // namespace

TEST_CASE("config parsing") {
  const auto c = parse_config(kSmall);
  CHECK(c.profile == "test");
  CHECK(c.global_seed == 9);
  CHECK(c.task_ids() == std::vector<int>{1, 5});
  CHECK(c.params_for(1, Difficulty::hard) == task_descriptor(1).params_for(Difficulty::hard));

  const auto shipped = load_config(fs::path(TACIT_SOURCE_DIR) / "configs/release.yaml");
  CHECK(shipped.puzzles_per_cell == 200);
  CHECK(shipped.resolutions == std::vector<int>{512, 1024, 2048});
  CHECK(shipped.task_ids().size() == 10);

  CHECK_THROWS_AS(parse_config("bogus: 1"), ValidationError);
  CHECK_THROWS_AS(parse_config("resolutions: [500]"), ValidationError);
  CHECK_THROWS_AS(parse_config("puzzles_per_cell: 0"), ValidationError);
  CHECK_THROWS_AS(parse_config("tasks: {nope: }"), ValidationError);
  CHECK_THROWS_AS(parse_config("tasks: {maze: {extreme: {grid: 8}}}"), ValidationError);
  // Canonical releases pin the parameter table.
  CHECK_THROWS_AS(parse_config("tasks: {maze: {easy: {grid: 16, layers: 1, portals: 0}}}"), ValidationError);
  CHECK_NOTHROW(parse_config("canonical: false\ntasks: {maze: {easy: {grid: 16, layers: 1, portals: 0}}}"));
  CHECK_THROWS_AS(parse_config("[1, 2"), ValidationError);
  CHECK_THROWS_AS(load_config("/nonexistent/config.yaml"), IoError);
}

TEST_CASE("naming") {
  CHECK(task_dir_name(7) == "task_07_graph_isomorphism");
  CHECK(puzzle_png(12) == "12_puzzle.png");
  CHECK(distractor_png(12, 3) == "12_distractor_3.png");
  CHECK(meta_name(5) == "5_meta.json");
}

TEST_CASE("small build: layout, regeneration, audit, determinism") {
  const auto config = parse_config(kSmall);
  const fs::path a = scratch("a"), b = scratch("b");
  const BuildResult ra = build_release(config, a, {.threads = 1});
  const BuildResult rb = build_release(config, b, {.threads = 2});

  const auto& m = ra.manifest;
  CHECK(m["counts"]["puzzles"] == 6);
  CHECK(m["counts"]["png_files"] == 36);
  CHECK(m["files"].size() == 42);
  CHECK(m["digest"] == rb.manifest["digest"]);
  CHECK(m["digest"] == files_digest(m["files"]));
  CHECK_FALSE(fs::exists(a / ".staging"));
  for (const auto& [task, g] : ra.gates) {
    CHECK(g.solutions == g.solutions_passed);
    CHECK(g.distractors == g.distractors_failed);
  }

  // Every manifest file exists and hashes as recorded.
  for (const auto& f : m["files"]) CHECK(sha256_hex(read_bytes(a / f["path"].get<std::string>())) == f["sha256"]);
  CHECK(audit_release(a).empty());

  for (const auto& p : m["puzzles"]) {
    const auto loaded = load_puzzle(a, p["task"], p["difficulty"], p["seed"]);
    REQUIRE(loaded.images.count(512));
    const auto& imgs = loaded.images.at(512);
    REQUIRE(imgs.size() == 6);
    CHECK(verify(loaded.instance, read_png(imgs[1])).passed);
    for (std::size_t i = 2; i < imgs.size(); ++i) CHECK_FALSE(verify(loaded.instance, read_png(imgs[i])).passed);
  }

  const auto first = m["puzzles"][0];
  const fs::path meta = a / task_dir_name(1) / first["difficulty"].get<std::string>() /
                        meta_name(first["seed"].get<std::uint64_t>());

  SUBCASE("tampered structure is caught on load") {
    auto j = read_json(meta);
    j["structure"]["solution"] = nlohmann::json::array();
    write_json(meta, j);
    CHECK_THROWS_AS(load_puzzle(a, "maze", first["difficulty"], first["seed"]), ValidationError);
    CHECK(audit_release(a) == std::vector<std::string>{meta.lexically_relative(a).generic_string()});
  }
  SUBCASE("a meta file moved to another seed is caught") {
    fs::copy_file(meta, meta.parent_path() / meta_name(1));
    CHECK_THROWS_AS(load_puzzle(a, "maze", first["difficulty"], 1), ValidationError);
  }
  SUBCASE("missing files and unknown names") {
    fs::remove(a / task_dir_name(1) / first["difficulty"].get<std::string>() / "512" /
               solution_png(first["seed"].get<std::uint64_t>()));
    CHECK_THROWS_AS(load_puzzle(a, "maze", first["difficulty"], first["seed"]), IoError);
    CHECK_THROWS_AS(load_puzzle(a, "maze", "extreme", first["seed"]), ValidationError);
    CHECK_THROWS_AS(load_puzzle(a, "tetris", "easy", first["seed"]), ValidationError);
    CHECK_FALSE(audit_release(a).empty());
  }
  fs::remove_all(a);
  fs::remove_all(b);
}
