#include "streambandit/rng.hpp"

namespace sbandit {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t master, Purpose purpose, std::uint64_t index) {
  std::uint64_t h = splitmix64(master);
  h = splitmix64(h ^ static_cast<std::uint64_t>(purpose));
  return splitmix64(h ^ index);
}

double uniform01(Engine& engine) {
  return static_cast<double>(engine() >> 11) * 0x1.0p-53;
}

bool bernoulli(Engine& engine, double p) {
  return uniform01(engine) < p;
}

__extension__ typedef unsigned __int128 u128;

std::uint64_t uniform_index(Engine& engine, std::uint64_t n) {
  const u128 wide = static_cast<u128>(engine()) * n;
  return static_cast<std::uint64_t>(wide >> 64);
}

}  // namespace sbandit
