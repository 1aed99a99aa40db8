#pragma once

#include <cstdint>
#include <random>

namespace sbandit {

// The one generator used repo-wide. Every random quantity in a run is drawn
// from a substream whose seed is derived from the master seed by
// derive_seed(), so the reward path of an arm does not depend on how an
// algorithm interleaves its pulls.
using Engine = std::mt19937_64;

// Substream tags. Values are part of the reproducibility contract; do not
// renumber.
enum class Purpose : std::uint64_t {
  Reward = 1,
  Order = 2,
  Instance = 3,
  Policy = 4,
  Seed = 5,
};

std::uint64_t splitmix64(std::uint64_t x);

// seed' = mix(mix(mix(master) ^ purpose) ^ index), mix = splitmix64 finalizer.
std::uint64_t derive_seed(std::uint64_t master, Purpose purpose, std::uint64_t index);

// Uniform double in [0, 1) from the top 53 bits of one engine output.
double uniform01(Engine& engine);

// True with probability p. p >= 1 always true, p <= 0 always false.
bool bernoulli(Engine& engine, double p);

// Uniform integer in [0, n) via 128-bit multiply-shift; n > 0.
std::uint64_t uniform_index(Engine& engine, std::uint64_t n);

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed) {}

  std::uint64_t seed() const { return seed_; }

  Engine substream(Purpose purpose, std::uint64_t index = 0) const {
    return Engine(derive_seed(seed_, purpose, index));
  }

  // Child Rng for a nested component (e.g. seed i of an experiment).
  Rng child(Purpose purpose, std::uint64_t index) const {
    return Rng(derive_seed(seed_, purpose, index));
  }

 private:
  std::uint64_t seed_;
};

}  // namespace sbandit
