#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "streambandit/instance.hpp"
#include "streambandit/rng.hpp"

namespace sbandit {

enum class StreamErrorKind {
  UnknownArm,
  MemoryFull,
  NotInMemory,
  HorizonExhausted,
  StreamClosed,
  DeleteNotAllowed,
  InvalidOrder,
  InvalidConfig,
};

const char* to_string(StreamErrorKind kind);

// Every access-model violation surfaces as this exception; nothing is
// silently clamped.
class StreamError : public std::runtime_error {
 public:
  StreamError(StreamErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  StreamErrorKind kind() const { return kind_; }

 private:
  StreamErrorKind kind_;
};

// Order in which a pass presents the arms. Passes are numbered from 1.
class StreamOrder {
 public:
  using Adversary = std::function<std::vector<ArmId>(int pass, std::size_t num_arms)>;

  static StreamOrder identity();
  static StreamOrder fixed(std::vector<ArmId> permutation);
  static StreamOrder per_pass_shuffle(std::uint64_t seed);
  static StreamOrder adversarial(Adversary adversary);

  // Permutation for the given pass; throws StreamError(InvalidOrder) if the
  // policy does not produce a bijection on 0..num_arms-1.
  std::vector<ArmId> permutation(int pass, std::size_t num_arms) const;

 private:
  enum class Kind { Identity, Fixed, Shuffle, Adversarial };
  Kind kind_ = Kind::Identity;
  std::vector<ArmId> fixed_;
  std::uint64_t seed_ = 0;
  Adversary adversary_;
};

struct SessionConfig {
  std::size_t memory = 2;
  int passes = 1;
  StreamOrder order = StreamOrder::identity();
  bool allow_delete = false;
  bool record_transcript = false;
  bool record_per_trial = false;
};

// Pull accounting. Buckets 1..B hold plays made while pass b was current;
// bucket B+1 holds plays made after the final pass was closed.
class RegretLedger {
 public:
  RegretLedger() = default;
  RegretLedger(std::size_t num_arms, int passes, std::vector<double> gaps, bool per_trial);

  void record(ArmId arm, int bucket);

  double cumulative_regret() const { return sum_ + compensation_; }
  std::uint64_t pulls(ArmId arm, int bucket) const;
  std::uint64_t total_pulls(ArmId arm) const;
  std::uint64_t total_pulls() const { return total_; }
  int buckets() const { return passes_ + 1; }
  const std::vector<double>& per_trial() const { return per_trial_; }

  // Σ_arm pulls(arm) · gap(arm), an independent route to the running sum.
  double regret_from_pulls() const;

 private:
  std::size_t num_arms_ = 0;
  int passes_ = 0;
  std::vector<double> gaps_;
  std::vector<std::uint64_t> pulls_;  // [(bucket-1) * K + arm]
  std::uint64_t total_ = 0;
  double sum_ = 0.0;
  double compensation_ = 0.0;
  bool keep_per_trial_ = false;
  std::vector<double> per_trial_;
};

enum class PassAdvance { Advanced, Exhausted };

// Live state of one run under the streaming access model: at most M arms in
// memory, at most B passes, at most T plays, and only resident arms can be
// played. The session holds the ground truth and the authoritative regret;
// algorithms see rewards only.
class StreamSession {
 public:
  StreamSession(const BanditInstance& instance, SessionConfig config, const Rng& rng);

  // Next arm of the current pass that is neither resident nor deleted, now
  // resident with no statistics; std::nullopt once the pass is exhausted.
  std::optional<ArmId> read_next();
  void discard(ArmId arm, bool delete_permanently = false);
  double play(ArmId arm);
  PassAdvance next_pass();

  int pass() const { return pass_; }
  int passes() const { return config_.passes; }
  bool stream_closed() const { return closed_; }
  bool pass_exhausted() const;
  std::size_t num_arms() const { return instance_->num_arms(); }
  std::size_t memory_capacity() const { return config_.memory; }
  std::size_t memory_size() const { return resident_count_; }
  bool in_memory(ArmId arm) const;
  bool deleted(ArmId arm) const;
  std::vector<ArmId> memory() const;
  std::uint64_t horizon() const { return instance_->horizon(); }
  std::uint64_t trials_used() const { return trials_; }
  std::uint64_t trials_left() const { return instance_->horizon() - trials_; }
  const RegretLedger& ledger() const { return ledger_; }
  const std::vector<ArmId>& current_permutation() const { return permutation_; }

  // JSON-lines transcript, one event per line; empty unless enabled.
  const std::string& transcript() const { return transcript_; }

 private:
  void check_arm(ArmId arm) const;
  void start_pass();

  const BanditInstance* instance_;
  SessionConfig config_;
  Rng rng_;
  RewardSampler sampler_;
  RegretLedger ledger_;
  int pass_ = 1;
  bool closed_ = false;
  std::vector<ArmId> permutation_;
  std::size_t cursor_ = 0;
  std::vector<char> resident_;
  std::vector<char> deleted_;
  std::size_t resident_count_ = 0;
  std::uint64_t trials_ = 0;
  std::string transcript_;
};

}  // namespace sbandit
