#include "streambandit/baselines.hpp"

#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

namespace sbandit {

const char* to_string(BaselineKind kind) {
  switch (kind) {
    case BaselineKind::FullMemoryElimination: return "full_elim";
    case BaselineKind::SinglePassETC: return "etc";
    case BaselineKind::UniformRandom: return "uniform";
  }
  return "?";
}

BaselineKind baseline_from_string(const std::string& name) {
  if (name == "full_elim") return BaselineKind::FullMemoryElimination;
  if (name == "etc") return BaselineKind::SinglePassETC;
  if (name == "uniform") return BaselineKind::UniformRandom;
  throw std::invalid_argument("unknown baseline \"" + name + "\"");
}

std::uint64_t etc_exploration_pulls(std::uint64_t horizon, std::size_t num_arms) {
  const double n0 = std::floor(std::cbrt(static_cast<double>(horizon) * static_cast<double>(horizon)) /
                               std::sqrt(static_cast<double>(num_arms)) * (1.0 + 1e-12));
  return n0 < 1.0 ? 1 : static_cast<std::uint64_t>(n0);
}

std::size_t baseline_min_memory(BaselineKind kind, std::size_t num_arms) {
  return kind == BaselineKind::SinglePassETC ? 2 : num_arms;
}

namespace {

struct Stats {
  ArmId id;
  std::uint64_t pulls = 0;
  double reward = 0.0;
  double mean() const { return pulls ? reward / static_cast<double>(pulls) : 0.0; }
};

void read_all(StreamSession& session, std::vector<Stats>& into) {
  while (session.memory_size() < session.memory_capacity()) {
    const auto arm = session.read_next();
    if (!arm) break;
    into.push_back({*arm});
  }
}

void run_full_elimination(StreamSession& session, const BanditInstance& instance, const BaselineConfig& config,
                          RunRecord& record) {
  const ConfidenceBound bounds(config.c, instance.horizon(), config.log_base);
  std::vector<Stats> active;
  read_all(session, active);
  while (session.trials_left() > 0 && active.size() > 1) {
    for (Stats& s : active) {
      if (session.trials_left() == 0) break;
      s.reward += session.play(s.id);
      ++s.pulls;
      if (std::abs(instance.mean(s.id) - s.mean()) >= bounds.radius(s.pulls)) record.violations = true;
    }
    double best_lcb = -std::numeric_limits<double>::infinity();
    for (const Stats& s : active) best_lcb = std::max(best_lcb, bounds.lcb(s.reward, s.pulls));
    std::vector<Stats> kept;
    for (const Stats& s : active) {
      if (bounds.ucb(s.reward, s.pulls) < best_lcb)
        session.discard(s.id);
      else
        kept.push_back(s);
    }
    active = std::move(kept);
  }
  const Stats* best = &active.front();
  for (const Stats& s : active)
    if (bounds.lcb(s.reward, s.pulls) > bounds.lcb(best->reward, best->pulls)) best = &s;
  record.best = best->id;
  while (session.trials_left() > 0) session.play(best->id);
}

void run_etc(StreamSession& session, const BanditInstance& instance, RunRecord& record) {
  const std::uint64_t explore = etc_exploration_pulls(instance.horizon(), instance.num_arms());
  std::optional<Stats> best;
  while (session.trials_left() > 0) {
    const auto arm = session.read_next();
    if (!arm) break;
    Stats s{*arm};
    while (s.pulls < explore && session.trials_left() > 0) {
      s.reward += session.play(s.id);
      ++s.pulls;
    }
    if (!best || s.mean() > best->mean()) {
      if (best) session.discard(best->id);
      best = s;
    } else {
      session.discard(s.id);
    }
  }
  session.next_pass();
  record.best = best->id;
  while (session.trials_left() > 0) session.play(best->id);
}

void run_uniform(StreamSession& session, const Rng& rng) {
  std::vector<Stats> resident;
  read_all(session, resident);
  Engine engine = rng.substream(Purpose::Policy);
  while (session.trials_left() > 0) session.play(resident[uniform_index(engine, resident.size())].id);
}

}  // namespace

RunRecord run_baseline(BaselineKind kind, const BanditInstance& instance, const BaselineConfig& config,
                       const Rng& rng, const RunOptions& options) {
  if (config.memory < baseline_min_memory(kind, instance.num_arms()))
    throw std::invalid_argument(std::string(to_string(kind)) + " needs M >= " +
                                std::to_string(baseline_min_memory(kind, instance.num_arms())));
  SessionConfig session_config;
  session_config.memory = config.memory;
  session_config.passes = 1;
  session_config.order = options.order;
  session_config.record_transcript = options.transcript != nullptr;
  StreamSession session(instance, std::move(session_config), rng);

  RunRecord record;
  record.algorithm = to_string(kind);
  switch (kind) {
    case BaselineKind::FullMemoryElimination: run_full_elimination(session, instance, config, record); break;
    case BaselineKind::SinglePassETC: run_etc(session, instance, record); break;
    case BaselineKind::UniformRandom: run_uniform(session, rng); break;
  }
  record.seed = rng.seed();
  record.horizon = instance.horizon();
  record.num_arms = instance.num_arms();
  record.regret = session.ledger().cumulative_regret();
  record.pulls = collect_pulls(session);
  record.trials = session.trials_used();
  if (options.transcript) *options.transcript = session.transcript();
  return record;
}

}  // namespace sbandit
