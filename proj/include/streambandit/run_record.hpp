#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "streambandit/instance.hpp"
#include "streambandit/stream_env.hpp"

namespace sbandit {

struct PullCount {
  ArmId arm;
  int pass = 0;  // 1..B, or B+1 for plays after the final pass
  std::uint64_t count = 0;

  friend bool operator==(const PullCount&, const PullCount&) = default;
};

// Outcome of one seeded episode. Shared by mbse and every baseline.
struct RunRecord {
  std::string algorithm;
  std::uint64_t seed = 0;
  std::uint64_t horizon = 0;
  std::size_t num_arms = 0;
  double regret = 0.0;
  bool violations = false;
  std::vector<PullCount> pulls;
  std::optional<ArmId> best;
  double lcb_final = 0.0;
  std::vector<double> lcb_checkpoints;  // value after each pass
  std::uint64_t trials = 0;

  std::uint64_t pulls_of(ArmId arm, int pass) const;
  friend bool operator==(const RunRecord&, const RunRecord&) = default;
};

// Non-zero (arm, bucket) counts in bucket-major, arm-minor order.
std::vector<PullCount> collect_pulls(const StreamSession& session);

Json run_record_to_json(const RunRecord& record);
RunRecord run_record_from_json(const Json& doc);

}  // namespace sbandit
