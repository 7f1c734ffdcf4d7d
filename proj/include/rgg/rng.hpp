#pragma once

#include <cstdint>

namespace rgg {

// Identifies one reproducible draw sequence. Identical (seed, stream_id)
// reproduce identical draws regardless of worker count or interleaving;
// the contract, not the algorithm family, is normative.
struct RandomStream {
  std::uint64_t seed = 0;
  std::uint64_t stream_id = 0;
};

// Counter-based splittable generator: output n is a 64-bit hash of
// (stream key, n), so streams can be handed to workers without shared state.
class Rng {
 public:
  explicit Rng(RandomStream stream);

  std::uint64_t next_u64();

  // uniform in [0, 1)
  double uniform();

  // standard normal, Marsaglia polar
  double gaussian();

  // Poisson(mean); inversion below mean 30, transformed rejection (PTRS)
  // above. Rejects non-finite or negative means.
  std::uint64_t poisson(double mean);

 private:
  std::uint64_t base_ = 0;
  std::uint64_t counter_ = 0;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace rgg
