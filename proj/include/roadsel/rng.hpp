#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

namespace roadsel {

/// splitmix64 finalizer; used to derive independent child seeds.
std::uint64_t mix_seed(std::uint64_t x);

/// Child seed for stream `index` of `parent`. Stable across platforms.
std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t index);

/// Thin wrapper over mt19937_64 with platform-independent draws.
/// std::uniform_*_distribution is implementation-defined, so the
/// transforms below are spelled out to keep outputs byte-stable.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform in [0, 1).
  double uniform();

  /// Uniform in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [0, n). n must be > 0.
  std::size_t index(std::size_t n);

  /// Uniform integer in [lo, hi] (inclusive).
  long long integer(long long lo, long long hi);

 private:
  std::mt19937_64 engine_;
};

}  // namespace roadsel
