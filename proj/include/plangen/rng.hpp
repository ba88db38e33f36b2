#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace plangen {

// SplitMix64 step; the backbone of all seed derivation.
std::uint64_t splitmix64(std::uint64_t x);

// Independent stream for (seed, index); used for per-slot sub-seeds so batch
// results do not depend on scheduling order.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

// FNV-1a 64-bit content hash. Stable across platforms, unlike std::hash.
std::uint64_t fnv1a64(std::string_view data);
std::string hex64(std::uint64_t value);

// Counter-based uniform draw in [0,1): the value for index k is independent
// of any other index, so parallel consumers agree with sequential ones.
double counter_real01(std::uint64_t seed, std::uint64_t index);

// mt19937_64 with hand-rolled distributions. The standard engine is
// bit-exact across platforms; the standard distributions are not.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  // Uniform in [0, n) by rejection; n must be > 0.
  std::uint64_t below(std::uint64_t n);

  // Uniform in [lo, hi] inclusive.
  std::int64_t range(std::int64_t lo, std::int64_t hi);

  // 53-bit uniform in [0, 1).
  double real01();

  bool bernoulli(double p) { return real01() < p; }

  template <typename T>
  void shuffle(std::vector<T>& values) {
    for (std::size_t i = values.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(below(i));
      std::swap(values[i - 1], values[j]);
    }
  }

  template <typename T>
  const T& pick(const std::vector<T>& values) {
    return values[static_cast<std::size_t>(below(values.size()))];
  }

  // Index drawn proportionally to weights (positive, finite).
  std::size_t weighted_pick(const std::vector<double>& weights);

 private:
  std::mt19937_64 engine_;
};

}  // namespace plangen
