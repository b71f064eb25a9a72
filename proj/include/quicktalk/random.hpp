#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace quicktalk {

std::uint64_t splitmix64(std::uint64_t x);

/// Stable 64-bit seed for a named stream. Does not depend on std::hash, so
/// streams are identical across standard library implementations.
std::uint64_t stream_seed(std::uint64_t master_seed, std::string_view name);

/// A reproducible random stream. Distribution helpers are implemented here
/// rather than with <random> distributions, whose outputs are
/// implementation-defined.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : engine_(seed) {}
  RandomStream(std::uint64_t master_seed, std::string_view name)
      : engine_(stream_seed(master_seed, name)) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform in [0, 1).
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, bound). bound must be > 0.
  std::uint64_t below(std::uint64_t bound);

  bool bernoulli(double p) { return uniform01() < p; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace quicktalk
