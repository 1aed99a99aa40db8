#pragma once

#include <cstdint>
#include <string>

#include "streambandit/instance.hpp"
#include "streambandit/mbse.hpp"
#include "streambandit/run_record.hpp"

namespace sbandit {

enum class BaselineKind {
  FullMemoryElimination,  // classic successive elimination, every arm resident (M >= K)
  SinglePassETC,          // one pass, explore each arm n0 times, keep the running best, commit
  UniformRandom,          // every arm resident, uniform play
};

const char* to_string(BaselineKind kind);
BaselineKind baseline_from_string(const std::string& name);

struct BaselineConfig {
  std::size_t memory = 2;
  // Confidence constant of the elimination baseline's radius sqrt(c log T / n).
  double c = 2.0;
  LogBase log_base = LogBase::Natural;
};

// Exploration pulls per arm of the explore-then-commit baseline:
// max(1, floor(T^{2/3} / sqrt(K))).
std::uint64_t etc_exploration_pulls(std::uint64_t horizon, std::size_t num_arms);

// Minimum memory each baseline needs for K arms.
std::size_t baseline_min_memory(BaselineKind kind, std::size_t num_arms);

// Runs under the same StreamSession rules as mbse. Throws
// std::invalid_argument when the memory is too small for the kind.
RunRecord run_baseline(BaselineKind kind, const BanditInstance& instance, const BaselineConfig& config,
                       const Rng& rng, const RunOptions& options = {});

}  // namespace sbandit
