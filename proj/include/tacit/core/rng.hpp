#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string_view>
#include <utility>

namespace tacit {

// splitmix64 finalizer. Bijective on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Seed for retry attempt `attempt` of a generator seeded with `seed`.
constexpr std::uint64_t retry_seed(std::uint64_t seed, std::uint32_t attempt) {
  return attempt == 0 ? seed : mix64(seed ^ mix64(0x5eedULL + attempt));
}

/// The single randomness source of one puzzle.
///
/// Engine is std::mt19937_64, whose output sequence is fixed by the standard.
/// All derived draws (bounded integers, reals, normals, shuffles) are computed
/// here rather than through <random> distributions, whose algorithms differ
/// between standard libraries.
class Rng {
 public:
  static constexpr std::string_view algorithm_id = "mt19937_64/tacit-draws-v1";

  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  Rng(const Rng&) = delete;
  Rng& operator=(const Rng&) = delete;
  Rng(Rng&&) = default;
  Rng& operator=(Rng&&) = default;

  std::uint64_t next() { return engine_(); }

  // Uniform integer in [lo, hi], rejection sampled.
  int uniform_int(int lo, int hi);

  // Uniform index in [0, n).
  std::size_t index(std::size_t n);

  // Uniform real in [0, 1) with 53 bits.
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  bool bernoulli(double p) { return uniform01() < p; }

  // Standard normal via Box-Muller (two uniforms per call, no caching).
  double normal();

  template <class T>
  void shuffle(std::span<T> items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      std::swap(items[i - 1], items[index(i)]);
    }
  }

  template <class Container>
  void shuffle(Container& c) {
    shuffle(std::span(c.data(), c.size()));
  }

  template <class Container>
  const auto& pick(const Container& c) {
    return c[index(c.size())];
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace tacit
