#include "streambandit/instance.hpp"

#include <algorithm>
#include <numeric>

namespace sbandit {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

bool in_unit_interval(double x) { return x >= 0.0 && x <= 1.0; }

void validate_model(const RewardModel& model, ArmId id) {
  std::visit(Overloaded{
                 [&](const BernoulliReward& b) {
                   if (!in_unit_interval(b.mean))
                     throw std::invalid_argument("arm " + std::to_string(id.value) +
                                                 ": Bernoulli mean outside [0,1]");
                 },
                 [&](const TapeReward& t) {
                   if (t.values.empty())
                     throw std::invalid_argument("arm " + std::to_string(id.value) + ": empty tape");
                   for (double v : t.values)
                     if (!in_unit_interval(v))
                       throw std::invalid_argument("arm " + std::to_string(id.value) +
                                                   ": tape value outside [0,1]");
                 },
             },
             model);
}

}  // namespace

double model_mean(const RewardModel& model) {
  return std::visit(Overloaded{
                        [](const BernoulliReward& b) { return b.mean; },
                        [](const TapeReward& t) {
                          return std::accumulate(t.values.begin(), t.values.end(), 0.0) /
                                 static_cast<double>(t.values.size());
                        },
                    },
                    model);
}

BanditInstance::BanditInstance(std::vector<Arm> arms, std::uint64_t horizon, Json meta)
    : arms_(std::move(arms)), horizon_(horizon), meta_(std::move(meta)) {
  if (arms_.empty()) throw std::invalid_argument("instance needs at least one arm");
  if (horizon_ < 1) throw std::invalid_argument("horizon must be >= 1");
  std::sort(arms_.begin(), arms_.end(), [](const Arm& a, const Arm& b) { return a.id < b.id; });
  for (std::size_t i = 0; i < arms_.size(); ++i) {
    if (arms_[i].id.index() != i)
      throw std::invalid_argument("arm ids must be exactly 0..K-1 without duplicates");
    validate_model(arms_[i].model, arms_[i].id);
    means_.push_back(model_mean(arms_[i].model));
  }
  max_mean_ = *std::max_element(means_.begin(), means_.end());
}

BanditInstance BanditInstance::bernoulli(const std::vector<double>& means, std::uint64_t horizon,
                                         Json meta) {
  std::vector<Arm> arms;
  arms.reserve(means.size());
  for (std::size_t i = 0; i < means.size(); ++i) arms.push_back({ArmId(i), BernoulliReward{means[i]}});
  return BanditInstance(std::move(arms), horizon, std::move(meta));
}

BanditInstance BanditInstance::tapes(std::vector<std::vector<double>> tapes, std::uint64_t horizon) {
  std::vector<Arm> arms;
  arms.reserve(tapes.size());
  for (std::size_t i = 0; i < tapes.size(); ++i) arms.push_back({ArmId(i), TapeReward{std::move(tapes[i])}});
  return BanditInstance(std::move(arms), horizon);
}

const Arm& BanditInstance::arm(ArmId id) const {
  if (!contains(id)) throw std::out_of_range("unknown arm " + std::to_string(id.value));
  return arms_[id.index()];
}

BanditInstance BanditInstance::with_horizon(std::uint64_t horizon) const {
  return BanditInstance(arms_, horizon, meta_);
}

std::vector<double> instance_gaps(const BanditInstance& instance) {
  std::vector<double> gaps;
  gaps.reserve(instance.num_arms());
  for (double m : instance.means()) gaps.push_back(instance.max_mean() - m);
  return gaps;
}

Json instance_to_json(const BanditInstance& instance) {
  Json doc;
  doc["T"] = instance.horizon();
  Json arms = Json::array();
  for (const Arm& arm : instance.arms()) {
    Json a;
    a["id"] = arm.id.value;
    std::visit(Overloaded{
                   [&](const BernoulliReward& b) {
                     a["kind"] = "bernoulli";
                     a["mean"] = b.mean;
                   },
                   [&](const TapeReward& t) {
                     a["kind"] = "tape";
                     a["values"] = t.values;
                   },
               },
               arm.model);
    arms.push_back(std::move(a));
  }
  doc["arms"] = std::move(arms);
  doc["meta"] = instance.meta();
  return doc;
}

BanditInstance instance_from_json(const Json& doc) {
  if (!doc.is_object() || !doc.contains("T") || !doc.contains("arms"))
    throw std::invalid_argument("instance JSON needs \"T\" and \"arms\"");
  std::vector<Arm> arms;
  for (const Json& a : doc.at("arms")) {
    const auto id = ArmId(a.at("id").get<std::uint32_t>());
    const std::string kind = a.at("kind").get<std::string>();
    if (kind == "bernoulli") {
      arms.push_back({id, BernoulliReward{a.at("mean").get<double>()}});
    } else if (kind == "tape") {
      arms.push_back({id, TapeReward{a.at("values").get<std::vector<double>>()}});
    } else {
      throw std::invalid_argument("unknown reward kind \"" + kind + "\"");
    }
  }
  Json meta = doc.contains("meta") ? doc.at("meta") : Json::object();
  return BanditInstance(std::move(arms), doc.at("T").get<std::uint64_t>(), std::move(meta));
}

RewardSampler::RewardSampler(const BanditInstance& instance, const Rng& rng)
    : instance_(&instance), draws_(instance.num_arms(), 0) {
  engines_.reserve(instance.num_arms());
  for (std::size_t i = 0; i < instance.num_arms(); ++i)
    engines_.push_back(rng.substream(Purpose::Reward, i));
}

double RewardSampler::sample(ArmId arm) {
  const Arm& a = instance_->arm(arm);
  const std::size_t i = arm.index();
  double reward = 0.0;
  if (const auto* b = std::get_if<BernoulliReward>(&a.model)) {
    reward = bernoulli(engines_[i], b->mean) ? 1.0 : 0.0;
  } else {
    const auto& tape = std::get<TapeReward>(a.model).values;
    if (draws_[i] >= tape.size())
      throw std::out_of_range("tape of arm " + std::to_string(arm.value) + " exhausted");
    reward = tape[draws_[i]];
  }
  ++draws_[i];
  return reward;
}

}  // namespace sbandit
