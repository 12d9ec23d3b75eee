#pragma once

#include <cstdint>
#include <random>

namespace roughsde {

// Mixes (seed, stream) into a 64-bit state with two rounds of splitmix64.
std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t stream) noexcept;

// Per-replica generator. Normal variates come from the Marsaglia polar
// method on top of mt19937_64 so that output is identical across standard
// library implementations.
class Rng {
 public:
  Rng(std::uint64_t seed, std::uint64_t stream = 0) : engine_(stream_seed(seed, stream)) {}

  std::uint64_t bits() { return engine_(); }
  // Uniform on [0,1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double a, double b) { return a + (b - a) * uniform(); }
  // Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n);
  double normal();

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace roughsde
