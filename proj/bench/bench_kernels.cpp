// Serial vs OpenMP timings for the hot kernels: rasterization, SSIM and the
// CA step. Arg 0 = serial, 1 = parallel.

#include <benchmark/benchmark.h>

#include "tacit/core/registry.hpp"
#include "tacit/core/rng.hpp"
#include "tacit/scene/raster.hpp"
#include "tacit/tasks/cellular.hpp"
#include "tacit/vision/vision.hpp"

using namespace tacit;

namespace {

Exec exec_of(const benchmark::State& s) { return s.range(0) ? Exec::parallel : Exec::serial; }

const PuzzleInstance& sample_puzzle() {
  static const PuzzleInstance inst = generate(1, Difficulty::hard, 42);
  return inst;
}

void BM_Rasterize(benchmark::State& state) {
  const Scene& scene = sample_puzzle().puzzle;
  const int res = static_cast<int>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(rasterize(scene, res, exec_of(state)));
  state.SetItemsProcessed(state.iterations() * res * res);
}
BENCHMARK(BM_Rasterize)->ArgsProduct({{0, 1}, {512, 1024}})->Unit(benchmark::kMillisecond);

void BM_Ssim(benchmark::State& state) {
  const int res = static_cast<int>(state.range(1));
  const RasterImage a = rasterize(sample_puzzle().solution, res);
  const RasterImage b = rasterize(sample_puzzle().distractors[0].scene, res);
  for (auto _ : state) benchmark::DoNotOptimize(vision::ssim(a, b, exec_of(state)));
  state.SetItemsProcessed(state.iterations() * res * res);
}
BENCHMARK(BM_Ssim)->ArgsProduct({{0, 1}, {512, 1024}})->Unit(benchmark::kMillisecond);

void BM_CaStep(benchmark::State& state) {
  const int n = static_cast<int>(state.range(1)), states = 8;
  Rng rng(3);
  ca::Grid g{n, std::vector<std::uint8_t>(static_cast<std::size_t>(n) * n)};
  for (auto& c : g.cells) c = static_cast<std::uint8_t>(rng.uniform_int(0, states - 1));
  ca::Rule rule{states, std::vector<std::uint8_t>(states * states)};
  for (auto& v : rule.table) v = static_cast<std::uint8_t>(rng.uniform_int(0, states - 1));
  for (auto _ : state) g = ca::step(g, rule, exec_of(state));
  state.SetItemsProcessed(state.iterations() * n * n);
}
BENCHMARK(BM_CaStep)->ArgsProduct({{0, 1}, {32, 512}});

}  // namespace

BENCHMARK_MAIN();
