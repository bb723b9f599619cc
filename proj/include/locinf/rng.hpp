#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace locinf {

/// SplitMix64 finalizer. Used to derive independent stream seeds.
std::uint64_t splitmix64(std::uint64_t x);

/// Derives a stream seed from a base seed and a list of stream coordinates
/// (e.g. round index, component index). Pure function of its arguments.
std::uint64_t derive_seed(std::uint64_t seed,
                          std::initializer_list<std::uint64_t> coords);

/// Deterministic random source.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the
/// standard. The mapping to integers and reals is done here rather than with
/// the <random> distributions, whose algorithms are implementation-defined,
/// so a given seed produces the same draws on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform integer in [0, bound). bound must be > 0.
  std::uint64_t uniform_below(std::uint64_t bound);

  /// Uniform integer in [lo, hi].
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform01();

  /// Uniform double in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace locinf
