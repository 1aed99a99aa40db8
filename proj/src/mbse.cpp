#include "streambandit/mbse.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sbandit {

void MbseConfig::validate() const {
  if (memory < 2) throw std::invalid_argument("mbse needs M >= 2 (reserved slot + one active slot)");
  if (passes < 1) throw std::invalid_argument("mbse needs B >= 1");
  if (!(c >= 5.0)) throw std::invalid_argument("confidence constant c must be >= 5");
}

std::vector<double> cap_schedule(std::uint64_t horizon, int passes, RegretMode mode) {
  if (horizon < 2) throw std::invalid_argument("cap_schedule needs T >= 2");
  if (passes < 1) throw std::invalid_argument("cap_schedule needs B >= 1");
  const double t = static_cast<double>(horizon);
  std::vector<double> schedule;
  schedule.reserve(static_cast<std::size_t>(passes));
  double previous = 1.0;
  if (mode == RegretMode::WorstCase) {
    const double growth = std::pow(t, std::ldexp(1.0, passes) / (std::ldexp(1.0, passes + 1) - 1.0));
    for (int b = 1; b <= passes; ++b) {
      previous = growth * std::sqrt(previous);
      schedule.push_back(previous);
    }
  } else {
    const double growth = std::pow(t, 1.0 / (passes + 1.0));
    for (int b = 1; b <= passes; ++b) {
      previous = growth * previous;
      schedule.push_back(previous);
    }
  }
  return schedule;
}

std::uint64_t per_arm_cap(double pass_budget, std::size_t num_arms, int passes, RegretMode mode) {
  double x = pass_budget;
  if (mode == RegretMode::WorstCase) x /= static_cast<double>(num_arms) * passes;
  // pow() lands a hair below exact integers (1e6^(2/3) = 9999.999...).
  const double floored = std::floor(x * (1.0 + 1e-12));
  return floored < 1.0 ? 1 : static_cast<std::uint64_t>(floored);
}

ConfidenceBound::ConfidenceBound(double c, std::uint64_t horizon, LogBase base)
    : scale_(c * (base == LogBase::Natural ? std::log(static_cast<double>(horizon))
                                           : std::log2(static_cast<double>(horizon)))) {}

double ConfidenceBound::radius(std::uint64_t n) const {
  if (n == 0) return std::numeric_limits<double>::infinity();
  return std::sqrt(scale_ / static_cast<double>(n));
}

double ConfidenceBound::lcb(double reward_sum, std::uint64_t n) const {
  if (n == 0) return -std::numeric_limits<double>::infinity();
  return reward_sum / static_cast<double>(n) - radius(n);
}

double ConfidenceBound::ucb(double reward_sum, std::uint64_t n) const {
  if (n == 0) return std::numeric_limits<double>::infinity();
  return reward_sum / static_cast<double>(n) + radius(n);
}

std::optional<int> distinguishing_pass(double gap, std::uint64_t horizon, int passes, double c) {
  if (!(gap > 0.0)) return std::nullopt;
  const double t = static_cast<double>(horizon);
  const double log_t = std::log(t);
  for (int b = 1; b <= passes; ++b) {
    const double precision = std::pow(t, static_cast<double>(b) / (passes + 1.0));
    if (gap > 4.0 * std::sqrt(c * log_t / precision)) return b;
  }
  return std::nullopt;
}

const char* to_string(ActionKind kind) {
  switch (kind) {
    case ActionKind::Read: return "read";
    case ActionKind::Play: return "play";
    case ActionKind::DiscardCapped: return "discard_capped";
    case ActionKind::DiscardEliminated: return "discard_eliminated";
    case ActionKind::AdvancePass: return "advance_pass";
    case ActionKind::ExploitBest: return "exploit_best";
    case ActionKind::Done: return "done";
  }
  return "?";
}

// ---------------------------------------------------------------------------

MbseAgent::MbseAgent(MbseConfig config, std::size_t num_arms, std::uint64_t horizon)
    : config_(config),
      num_arms_(num_arms),
      horizon_(horizon),
      bounds_(config.c, horizon, config.log_base) {
  config_.validate();
  if (num_arms_ == 0) throw std::invalid_argument("mbse needs K >= 1");
  schedule_ = horizon_ >= 2 ? cap_schedule(horizon_, config_.passes, config_.mode)
                            : std::vector<double>(static_cast<std::size_t>(config_.passes), 1.0);
  for (double n : schedule_) caps_.push_back(per_arm_cap(n, num_arms_, config_.passes, config_.mode));
  active_.reserve(config_.memory);
}

const ActiveArm* MbseAgent::find(ArmId arm) const {
  for (const ActiveArm& a : active_)
    if (a.id == arm) return &a;
  return nullptr;
}

void MbseAgent::release(StreamSession& session, ArmId arm) {
  if (best_ != arm) session.discard(arm);
}

void MbseAgent::promote(StreamSession& session, const ActiveArm& arm) {
  const double lcb = bounds_.lcb(arm.reward, arm.pulls);
  const bool better = lcb > best_lcb_ || (lcb == best_lcb_ && best_ && arm.id < *best_);
  if (!better) return;
  const std::optional<ArmId> previous = best_;
  best_ = arm.id;
  best_lcb_ = lcb;
  // The old estimate loses its reserved slot; it stays resident only if it is
  // still under evaluation in the active set.
  if (previous && *previous != arm.id && find(*previous) == nullptr) session.discard(*previous);
}

Action MbseAgent::end_pass(StreamSession& session) {
  checkpoints_.push_back(lcb_tilde());
  session.next_pass();
  if (pass_ < config_.passes) {
    ++pass_;
    for (ActiveArm& a : active_) {
      a.pulls = 0;
      a.reward = 0.0;
    }
    drained_ = false;
    phase_ = Phase::Fill;
  } else {
    phase_ = Phase::Exploit;
  }
  return {ActionKind::AdvancePass, std::nullopt};
}

Action MbseAgent::step(StreamSession& session) {
  if (phase_ == Phase::Done) return {};
  if (session.trials_used() >= horizon_) {
    phase_ = Phase::Done;
    return {};
  }
  for (;;) {
    switch (phase_) {
      case Phase::Fill:
        if (!drained_ && active_.size() + 1 < config_.memory) {
          if (const auto arm = session.read_next()) {
            active_.push_back({*arm, 0, 0.0});
            return {ActionKind::Read, *arm};
          }
          drained_ = true;
        }
        phase_ = Phase::Decide;
        break;

      case Phase::Decide: {
        if (active_.empty()) return end_pass(session);
        auto least = active_.begin();
        for (auto it = active_.begin(); it != active_.end(); ++it)
          if (it->pulls < least->pulls || (it->pulls == least->pulls && it->id < least->id)) least = it;
        if (least->pulls >= cap()) {
          if (drained_) return end_pass(session);
          auto most = active_.begin();
          for (auto it = active_.begin(); it != active_.end(); ++it)
            if (it->pulls > most->pulls || (it->pulls == most->pulls && it->id < most->id)) most = it;
          const ArmId victim = most->id;
          active_.erase(most);
          release(session, victim);
          phase_ = Phase::Eliminate;
          return {ActionKind::DiscardCapped, victim};
        }
        const ArmId arm = least->id;
        least->reward += session.play(arm);
        ++least->pulls;
        promote(session, *least);
        phase_ = Phase::Eliminate;
        return {ActionKind::Play, arm};
      }

      case Phase::Eliminate: {
        phase_ = Phase::Fill;
        const double threshold = lcb_tilde();
        auto victim = active_.end();
        for (auto it = active_.begin(); it != active_.end(); ++it)
          if (bounds_.ucb(it->reward, it->pulls) < threshold && (victim == active_.end() || it->id < victim->id))
            victim = it;
        if (victim == active_.end()) break;
        const ArmId arm = victim->id;
        active_.erase(victim);
        release(session, arm);
        return {ActionKind::DiscardEliminated, arm};
      }

      case Phase::Exploit:
        if (!best_) {
          phase_ = Phase::Done;
          return {};
        }
        session.play(*best_);
        return {ActionKind::ExploitBest, *best_};

      case Phase::Done:
        return {};
    }
  }
}

// ---------------------------------------------------------------------------

RunRecord run_mbse(const BanditInstance& instance, const MbseConfig& config, const Rng& rng,
                   const RunOptions& options) {
  SessionConfig session_config;
  session_config.memory = config.memory;
  session_config.passes = config.passes;
  session_config.order = options.order;
  session_config.record_transcript = options.transcript != nullptr;
  StreamSession session(instance, std::move(session_config), rng);
  MbseAgent agent(config, instance.num_arms(), instance.horizon());

  bool violation = false;
  for (;;) {
    const Action action = agent.step(session);
    if (options.actions) options.actions->push_back(action);
    if (action.kind == ActionKind::Done) break;
    if (action.kind == ActionKind::Play) {
      const ActiveArm* stats = agent.find(*action.arm);
      const double empirical = stats->reward / static_cast<double>(stats->pulls);
      if (std::abs(instance.mean(*action.arm) - empirical) >= agent.bounds().radius(stats->pulls)) violation = true;
    }
  }

  RunRecord record;
  record.algorithm = "mbse";
  record.seed = rng.seed();
  record.horizon = instance.horizon();
  record.num_arms = instance.num_arms();
  record.regret = session.ledger().cumulative_regret();
  record.violations = violation;
  record.pulls = collect_pulls(session);
  record.best = agent.best();
  record.lcb_final = agent.lcb_tilde();
  record.lcb_checkpoints = agent.lcb_checkpoints();
  record.trials = session.trials_used();
  if (options.transcript) *options.transcript = session.transcript();
  return record;
}

}  // namespace sbandit
