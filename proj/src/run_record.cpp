#include "streambandit/run_record.hpp"

namespace sbandit {

std::uint64_t RunRecord::pulls_of(ArmId arm, int pass) const {
  for (const PullCount& p : pulls)
    if (p.arm == arm && p.pass == pass) return p.count;
  return 0;
}

std::vector<PullCount> collect_pulls(const StreamSession& session) {
  std::vector<PullCount> out;
  const RegretLedger& ledger = session.ledger();
  for (int b = 1; b <= ledger.buckets(); ++b)
    for (std::size_t i = 0; i < session.num_arms(); ++i)
      if (const auto n = ledger.pulls(ArmId(i), b); n > 0) out.push_back({ArmId(i), b, n});
  return out;
}

Json run_record_to_json(const RunRecord& record) {
  Json doc;
  doc["regret"] = record.regret;
  doc["violations"] = record.violations;
  Json pulls = Json::array();
  for (const PullCount& p : record.pulls) pulls.push_back(Json::array({p.arm.value, p.pass, p.count}));
  doc["pulls"] = std::move(pulls);
  doc["best"] = record.best ? Json(record.best->value) : Json(nullptr);
  doc["lcb_final"] = record.lcb_final;
  doc["algorithm"] = record.algorithm;
  doc["seed"] = record.seed;
  doc["T"] = record.horizon;
  doc["K"] = record.num_arms;
  doc["trials"] = record.trials;
  doc["lcb_checkpoints"] = record.lcb_checkpoints;
  return doc;
}

RunRecord run_record_from_json(const Json& doc) {
  RunRecord r;
  r.regret = doc.at("regret").get<double>();
  r.violations = doc.at("violations").get<bool>();
  for (const Json& p : doc.at("pulls"))
    r.pulls.push_back({ArmId(p.at(0).get<std::uint32_t>()), p.at(1).get<int>(), p.at(2).get<std::uint64_t>()});
  if (!doc.at("best").is_null()) r.best = ArmId(doc.at("best").get<std::uint32_t>());
  r.lcb_final = doc.at("lcb_final").get<double>();
  r.algorithm = doc.value("algorithm", std::string{});
  r.seed = doc.value("seed", std::uint64_t{0});
  r.horizon = doc.value("T", std::uint64_t{0});
  r.num_arms = doc.value("K", std::size_t{0});
  r.trials = doc.value("trials", std::uint64_t{0});
  if (doc.contains("lcb_checkpoints")) r.lcb_checkpoints = doc.at("lcb_checkpoints").get<std::vector<double>>();
  return r;
}

}  // namespace sbandit
