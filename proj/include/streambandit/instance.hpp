#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "streambandit/rng.hpp"

namespace sbandit {

using Json = nlohmann::ordered_json;

struct ArmId {
  std::uint32_t value = 0;

  constexpr ArmId() = default;
  constexpr explicit ArmId(std::uint32_t v) : value(v) {}
  constexpr explicit ArmId(std::size_t v) : value(static_cast<std::uint32_t>(v)) {}
  constexpr explicit ArmId(int v) : value(static_cast<std::uint32_t>(v)) {}

  constexpr std::size_t index() const { return value; }
  friend constexpr auto operator<=>(ArmId, ArmId) = default;
};

struct BernoulliReward {
  double mean = 0.0;
};

// Deterministic reward sequence; the k-th draw of the arm returns values[k].
struct TapeReward {
  std::vector<double> values;
};

using RewardModel = std::variant<BernoulliReward, TapeReward>;

double model_mean(const RewardModel& model);

struct Arm {
  ArmId id;
  RewardModel model;
};

// Ground truth for one bandit problem. Immutable after construction; arms are
// stored in id order and ids are exactly 0..K-1.
class BanditInstance {
 public:
  BanditInstance(std::vector<Arm> arms, std::uint64_t horizon, Json meta = Json::object());

  static BanditInstance bernoulli(const std::vector<double>& means, std::uint64_t horizon,
                                  Json meta = Json::object());
  static BanditInstance tapes(std::vector<std::vector<double>> tapes, std::uint64_t horizon);

  std::size_t num_arms() const { return arms_.size(); }
  std::uint64_t horizon() const { return horizon_; }
  const std::vector<Arm>& arms() const { return arms_; }
  const Arm& arm(ArmId id) const;
  bool contains(ArmId id) const { return id.index() < arms_.size(); }
  const Json& meta() const { return meta_; }

  const std::vector<double>& means() const { return means_; }
  double mean(ArmId id) const { return means_.at(id.index()); }
  double max_mean() const { return max_mean_; }

  // Same arms, different horizon.
  BanditInstance with_horizon(std::uint64_t horizon) const;

 private:
  std::vector<Arm> arms_;
  std::uint64_t horizon_;
  Json meta_;
  std::vector<double> means_;
  double max_mean_ = 0.0;
};

// Gap of every arm against the best mean, indexed by arm id.
std::vector<double> instance_gaps(const BanditInstance& instance);

Json instance_to_json(const BanditInstance& instance);
BanditInstance instance_from_json(const Json& doc);

// Per-run reward source. Each arm owns an independent substream (Bernoulli)
// or a tape cursor, so the sample path of arm i depends only on the seed and
// on how many times arm i has been drawn.
class RewardSampler {
 public:
  RewardSampler(const BanditInstance& instance, const Rng& rng);

  double sample(ArmId arm);
  std::uint64_t draws(ArmId arm) const { return draws_.at(arm.index()); }

 private:
  const BanditInstance* instance_;
  std::vector<Engine> engines_;
  std::vector<std::uint64_t> draws_;
};

}  // namespace sbandit

template <>
struct std::hash<sbandit::ArmId> {
  std::size_t operator()(sbandit::ArmId a) const noexcept { return std::hash<std::uint32_t>{}(a.value); }
};
