#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "streambandit/instance.hpp"
#include "streambandit/run_record.hpp"
#include "streambandit/stream_env.hpp"

namespace sbandit {

// w in the algorithm's input: 1 targets worst-case regret, 0 instance-dependent.
enum class RegretMode : int { InstanceDependent = 0, WorstCase = 1 };

enum class LogBase { Natural, Two };

struct MbseConfig {
  RegretMode mode = RegretMode::WorstCase;
  std::size_t memory = 2;  // one reserved slot for the estimated best arm + M-1 active slots
  int passes = 1;
  double c = 5.0;
  LogBase log_base = LogBase::Natural;

  void validate() const;
};

// Pass budgets N^1..N^B before flooring.
//   worst-case:          N^b = T^{2^B/(2^{B+1}-1)} * sqrt(N^{b-1}),  N^0 = 1
//   instance-dependent:  N^b = T^{1/(B+1)} * N^{b-1},                N^0 = 1
std::vector<double> cap_schedule(std::uint64_t horizon, int passes, RegretMode mode);

// Per-arm pulls allowed in a pass: max(1, floor(N/(K*B))) in worst-case mode,
// max(1, floor(N)) in instance-dependent mode.
std::uint64_t per_arm_cap(double pass_budget, std::size_t num_arms, int passes, RegretMode mode);

class ConfidenceBound {
 public:
  ConfidenceBound(double c, std::uint64_t horizon, LogBase base);

  // sqrt(c log T / n); +inf for n = 0.
  double radius(std::uint64_t n) const;
  // -inf / +inf when n = 0.
  double lcb(double reward_sum, std::uint64_t n) const;
  double ucb(double reward_sum, std::uint64_t n) const;

 private:
  double scale_;  // c * log T
};

// First pass b in [1, B] with gap > 4 sqrt(c ln T / T^{b/(B+1)}), if any.
std::optional<int> distinguishing_pass(double gap, std::uint64_t horizon, int passes, double c = 5.0);

enum class ActionKind { Read, Play, DiscardCapped, DiscardEliminated, AdvancePass, ExploitBest, Done };

const char* to_string(ActionKind kind);

struct Action {
  ActionKind kind = ActionKind::Done;
  std::optional<ArmId> arm;

  friend bool operator==(const Action&, const Action&) = default;
};

struct ActiveArm {
  ArmId id;
  std::uint64_t pulls = 0;  // n^b_i
  double reward = 0.0;      // r^b_i
};

// Memory Bounded Successive Elimination as an explicit state machine over a
// StreamSession. Each step() performs exactly one externally visible action.
//
// Resolved details:
//  - ties in the least-played argmin and in the LCB argmax go to the smallest
//    ArmId; the "arbitrary" capped discard removes the most-played arm;
//  - the estimated-best arm tracks the running maximum LCB over the whole run,
//    and lcb_tilde() = max(0, that maximum) is what eliminates arms;
//  - the estimated-best arm stays resident in the reserved slot when it leaves
//    the active set, so later passes skip it in the stream;
//  - once the stream of a pass is drained, the resident arms keep playing
//    until the least-played one reaches the cap, then the pass ends.
class MbseAgent {
 public:
  MbseAgent(MbseConfig config, std::size_t num_arms, std::uint64_t horizon);

  Action step(StreamSession& session);

  bool done() const { return phase_ == Phase::Done; }
  int pass() const { return pass_; }
  std::uint64_t cap() const { return caps_.at(static_cast<std::size_t>(pass_ - 1)); }
  const std::vector<std::uint64_t>& caps() const { return caps_; }
  const std::vector<double>& schedule() const { return schedule_; }
  const ConfidenceBound& bounds() const { return bounds_; }
  const std::vector<ActiveArm>& active() const { return active_; }
  const ActiveArm* find(ArmId arm) const;
  std::optional<ArmId> best() const { return best_; }
  double lcb_tilde() const { return best_lcb_ > 0.0 ? best_lcb_ : 0.0; }
  const std::vector<double>& lcb_checkpoints() const { return checkpoints_; }

 private:
  enum class Phase { Fill, Decide, Eliminate, Exploit, Done };

  Action end_pass(StreamSession& session);
  void release(StreamSession& session, ArmId arm);
  void promote(StreamSession& session, const ActiveArm& arm);

  MbseConfig config_;
  std::size_t num_arms_;
  std::uint64_t horizon_;
  ConfidenceBound bounds_;
  std::vector<double> schedule_;
  std::vector<std::uint64_t> caps_;
  std::vector<ActiveArm> active_;
  std::optional<ArmId> best_;
  double best_lcb_ = -std::numeric_limits<double>::infinity();
  std::vector<double> checkpoints_;
  Phase phase_ = Phase::Fill;
  int pass_ = 1;
  bool drained_ = false;
};

struct RunOptions {
  StreamOrder order = StreamOrder::identity();
  std::string* transcript = nullptr;    // filled when non-null
  std::vector<Action>* actions = nullptr;  // filled when non-null
};

// One complete episode. The confidence-violation flag compares every
// post-play empirical mean with the true mean, which only the harness knows.
RunRecord run_mbse(const BanditInstance& instance, const MbseConfig& config, const Rng& rng,
                   const RunOptions& options = {});

}  // namespace sbandit
