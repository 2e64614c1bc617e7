#pragma once

#include <cstdint>
#include <random>

namespace hhf {

// Seedable generator whose output is identical on every platform.
//
// The engine is std::mt19937_64, whose sequence is fixed by the standard.
// The standard distributions are not (their algorithms are implementation
// defined), so the uniform and normal transforms are done here by hand.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // Standard normal via the Marsaglia polar method.
  double normal();

  bool bernoulli(double probability) { return uniform() < probability; }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

// SplitMix64 finalizer; used to derive independent child seeds.
std::uint64_t mix64(std::uint64_t x);

// Seed for stream `stream` of trial `index` under a master seed. Distinct
// (index, stream) pairs give unrelated seeds.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index,
                          std::uint64_t stream = 0);

}  // namespace hhf
