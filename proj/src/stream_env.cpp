#include "streambandit/stream_env.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

namespace sbandit {

const char* to_string(StreamErrorKind kind) {
  switch (kind) {
    case StreamErrorKind::UnknownArm: return "unknown arm";
    case StreamErrorKind::MemoryFull: return "must discard before read";
    case StreamErrorKind::NotInMemory: return "not in memory";
    case StreamErrorKind::HorizonExhausted: return "horizon exhausted";
    case StreamErrorKind::StreamClosed: return "stream closed";
    case StreamErrorKind::DeleteNotAllowed: return "permanent deletion not enabled";
    case StreamErrorKind::InvalidOrder: return "invalid stream order";
    case StreamErrorKind::InvalidConfig: return "invalid session config";
  }
  return "?";
}

namespace {

[[noreturn]] void fail(StreamErrorKind kind, const std::string& detail = {}) {
  std::string msg = to_string(kind);
  if (!detail.empty()) msg += ": " + detail;
  throw StreamError(kind, msg);
}

}  // namespace

// ---------------------------------------------------------------------------
// StreamOrder

StreamOrder StreamOrder::identity() { return StreamOrder{}; }

StreamOrder StreamOrder::fixed(std::vector<ArmId> permutation) {
  StreamOrder order;
  order.kind_ = Kind::Fixed;
  order.fixed_ = std::move(permutation);
  return order;
}

StreamOrder StreamOrder::per_pass_shuffle(std::uint64_t seed) {
  StreamOrder order;
  order.kind_ = Kind::Shuffle;
  order.seed_ = seed;
  return order;
}

StreamOrder StreamOrder::adversarial(Adversary adversary) {
  StreamOrder order;
  order.kind_ = Kind::Adversarial;
  order.adversary_ = std::move(adversary);
  return order;
}

std::vector<ArmId> StreamOrder::permutation(int pass, std::size_t num_arms) const {
  std::vector<ArmId> perm;
  switch (kind_) {
    case Kind::Identity:
      perm.reserve(num_arms);
      for (std::size_t i = 0; i < num_arms; ++i) perm.emplace_back(i);
      break;
    case Kind::Fixed:
      perm = fixed_;
      break;
    case Kind::Shuffle: {
      perm.reserve(num_arms);
      for (std::size_t i = 0; i < num_arms; ++i) perm.emplace_back(i);
      Engine engine(derive_seed(seed_, Purpose::Order, static_cast<std::uint64_t>(pass)));
      for (std::size_t i = num_arms; i > 1; --i) std::swap(perm[i - 1], perm[uniform_index(engine, i)]);
      break;
    }
    case Kind::Adversarial:
      perm = adversary_(pass, num_arms);
      break;
  }
  if (perm.size() != num_arms) fail(StreamErrorKind::InvalidOrder, "permutation has wrong length");
  std::vector<char> seen(num_arms, 0);
  for (ArmId a : perm) {
    if (a.index() >= num_arms || seen[a.index()])
      fail(StreamErrorKind::InvalidOrder, "not a bijection on the arms");
    seen[a.index()] = 1;
  }
  return perm;
}

// ---------------------------------------------------------------------------
// RegretLedger

RegretLedger::RegretLedger(std::size_t num_arms, int passes, std::vector<double> gaps, bool per_trial)
    : num_arms_(num_arms),
      passes_(passes),
      gaps_(std::move(gaps)),
      pulls_(num_arms * static_cast<std::size_t>(passes + 1), 0),
      keep_per_trial_(per_trial) {}

void RegretLedger::record(ArmId arm, int bucket) {
  ++pulls_[static_cast<std::size_t>(bucket - 1) * num_arms_ + arm.index()];
  ++total_;
  // Neumaier summation keeps the running total within an ulp of the exact sum.
  const double gap = gaps_[arm.index()];
  const double t = sum_ + gap;
  if (std::abs(sum_) >= std::abs(gap))
    compensation_ += (sum_ - t) + gap;
  else
    compensation_ += (gap - t) + sum_;
  sum_ = t;
  if (keep_per_trial_) per_trial_.push_back(gap);
}

std::uint64_t RegretLedger::pulls(ArmId arm, int bucket) const {
  if (bucket < 1 || bucket > passes_ + 1 || arm.index() >= num_arms_) return 0;
  return pulls_[static_cast<std::size_t>(bucket - 1) * num_arms_ + arm.index()];
}

std::uint64_t RegretLedger::total_pulls(ArmId arm) const {
  std::uint64_t n = 0;
  for (int b = 1; b <= passes_ + 1; ++b) n += pulls(arm, b);
  return n;
}

double RegretLedger::regret_from_pulls() const {
  double r = 0.0;
  for (std::size_t i = 0; i < num_arms_; ++i)
    r += static_cast<double>(total_pulls(ArmId(i))) * gaps_[i];
  return r;
}

// ---------------------------------------------------------------------------
// StreamSession

StreamSession::StreamSession(const BanditInstance& instance, SessionConfig config, const Rng& rng)
    : instance_(&instance),
      config_(std::move(config)),
      rng_(rng),
      sampler_(instance, rng),
      ledger_(instance.num_arms(), config_.passes, instance_gaps(instance), config_.record_per_trial),
      resident_(instance.num_arms(), 0),
      deleted_(instance.num_arms(), 0) {
  if (config_.memory < 1) fail(StreamErrorKind::InvalidConfig, "memory must be >= 1");
  if (config_.passes < 1) fail(StreamErrorKind::InvalidConfig, "passes must be >= 1");
  for (const Arm& arm : instance.arms()) {
    if (const auto* tape = std::get_if<TapeReward>(&arm.model); tape && tape->values.size() < instance.horizon())
      fail(StreamErrorKind::InvalidConfig, "tape of arm " + std::to_string(arm.id.value) + " shorter than horizon");
  }
  start_pass();
}

void StreamSession::start_pass() {
  permutation_ = config_.order.permutation(pass_, instance_->num_arms());
  cursor_ = 0;
  if (config_.record_transcript) transcript_ += "{\"ev\":\"pass\",\"pass\":" + std::to_string(pass_) + "}\n";
}

void StreamSession::check_arm(ArmId arm) const {
  if (!instance_->contains(arm)) fail(StreamErrorKind::UnknownArm, std::to_string(arm.value));
}

bool StreamSession::in_memory(ArmId arm) const {
  return instance_->contains(arm) && resident_[arm.index()] != 0;
}

bool StreamSession::deleted(ArmId arm) const {
  return instance_->contains(arm) && deleted_[arm.index()] != 0;
}

std::vector<ArmId> StreamSession::memory() const {
  std::vector<ArmId> out;
  for (std::size_t i = 0; i < resident_.size(); ++i)
    if (resident_[i]) out.emplace_back(i);
  return out;
}

bool StreamSession::pass_exhausted() const {
  if (closed_) return true;
  for (std::size_t c = cursor_; c < permutation_.size(); ++c) {
    const std::size_t i = permutation_[c].index();
    if (!resident_[i] && !deleted_[i]) return false;
  }
  return true;
}

std::optional<ArmId> StreamSession::read_next() {
  if (closed_) fail(StreamErrorKind::StreamClosed, "no passes left");
  if (resident_count_ >= config_.memory) fail(StreamErrorKind::MemoryFull);
  while (cursor_ < permutation_.size()) {
    const ArmId arm = permutation_[cursor_++];
    if (resident_[arm.index()] || deleted_[arm.index()]) continue;
    resident_[arm.index()] = 1;
    ++resident_count_;
    if (config_.record_transcript)
      transcript_ += "{\"ev\":\"read\",\"arm\":" + std::to_string(arm.value) + "}\n";
    return arm;
  }
  return std::nullopt;
}

void StreamSession::discard(ArmId arm, bool delete_permanently) {
  check_arm(arm);
  if (!resident_[arm.index()]) fail(StreamErrorKind::NotInMemory, std::to_string(arm.value));
  if (delete_permanently && !config_.allow_delete) fail(StreamErrorKind::DeleteNotAllowed);
  resident_[arm.index()] = 0;
  --resident_count_;
  if (delete_permanently) deleted_[arm.index()] = 1;
  if (config_.record_transcript) {
    transcript_ += "{\"ev\":\"discard\",\"arm\":" + std::to_string(arm.value);
    transcript_ += delete_permanently ? ",\"delete\":true}\n" : "}\n";
  }
}

double StreamSession::play(ArmId arm) {
  check_arm(arm);
  if (!resident_[arm.index()]) fail(StreamErrorKind::NotInMemory, std::to_string(arm.value));
  if (trials_ >= instance_->horizon()) fail(StreamErrorKind::HorizonExhausted);
  const double reward = sampler_.sample(arm);
  ++trials_;
  ledger_.record(arm, closed_ ? config_.passes + 1 : pass_);
  if (config_.record_transcript) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", reward);
    transcript_ += "{\"ev\":\"play\",\"arm\":" + std::to_string(arm.value) + ",\"reward\":" + buf + "}\n";
  }
  return reward;
}

PassAdvance StreamSession::next_pass() {
  if (closed_ || pass_ >= config_.passes) {
    closed_ = true;
    return PassAdvance::Exhausted;
  }
  ++pass_;
  start_pass();
  return PassAdvance::Advanced;
}

}  // namespace sbandit
