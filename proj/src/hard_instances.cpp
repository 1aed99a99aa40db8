#include "streambandit/hard_instances.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "streambandit/infotheory.hpp"

namespace sbandit {

PsiTable::PsiTable(std::vector<double> probs) : probs_(std::move(probs)) {
  if (probs_.empty() || probs_.size() % 2 != 0) throw std::invalid_argument("psi needs A >= 1 arms");
  for (double p : probs_)
    if (!(p >= 0.0)) throw std::invalid_argument("psi has a negative or NaN cell");
  const double total = std::accumulate(probs_.begin(), probs_.end(), 0.0);
  if (std::abs(total - 1.0) > 1e-12) throw std::invalid_argument("psi is not normalized");
}

PsiTable PsiTable::uniform(std::size_t arms) {
  return PsiTable(std::vector<double>(2 * arms, 1.0 / (2.0 * static_cast<double>(arms))));
}

PsiTable PsiTable::point_mass(std::size_t arms, std::size_t special, int y) {
  return from_entries(arms, {{special, y, 1.0}});
}

PsiTable PsiTable::from_entries(std::size_t arms, const std::vector<std::tuple<std::size_t, int, double>>& entries) {
  if (arms == 0) throw std::invalid_argument("psi needs A >= 1 arms");
  std::vector<double> probs(2 * arms, 0.0);
  for (const auto& [i, y, p] : entries) {
    if (i >= arms || (y != 0 && y != 1)) throw std::invalid_argument("psi entry outside A x {0,1}");
    probs[2 * i + static_cast<std::size_t>(y)] += p;
  }
  return PsiTable(std::move(probs));
}

std::pair<std::size_t, int> PsiTable::sample(Engine& engine) const {
  const double u = uniform01(engine);
  double acc = 0.0;
  std::size_t last = 0;
  for (std::size_t c = 0; c < probs_.size(); ++c) {
    if (probs_[c] <= 0.0) continue;
    last = c;
    acc += probs_[c];
    if (u < acc) return {c / 2, static_cast<int>(c % 2)};
  }
  return {last / 2, static_cast<int>(last % 2)};  // u landed in the rounding slack
}

LayerDraw sample_layer(const LayerSpec& spec, Engine& engine) {
  if (!(spec.delta <= 0.25)) throw std::invalid_argument("layer gap must be <= 1/4");
  if (spec.psi.arms() != spec.count) throw std::invalid_argument("psi size does not match the layer");
  LayerDraw draw;
  draw.means.assign(spec.count, 0.5);
  std::tie(draw.special, draw.y) = spec.psi.sample(engine);
  draw.means[draw.special] = 0.5 + draw.y * spec.delta;
  return draw;
}

std::vector<double> delta_schedule(std::uint64_t horizon, int passes, int layers) {
  if (passes < 1 || layers < 2 || layers > passes + 1)
    throw std::invalid_argument("delta_schedule needs 1 <= b <= B (layers = b + 1)");
  const double t = static_cast<double>(horizon);
  const double denom = std::ldexp(1.0, passes + 1) - 1.0;
  std::vector<double> deltas;
  for (int j = 1; j <= layers; ++j) {
    const double exponent = (std::ldexp(1.0, passes) - std::ldexp(1.0, j - 1)) / denom;
    deltas.push_back(std::pow(t, -exponent) / 4.0);
  }
  return deltas;
}

void HardInstanceSpec::validate() const {
  if (passes < 1 || b < 1 || b > passes) throw std::invalid_argument("hard instance needs 1 <= b <= B");
  if (horizon < 2) throw std::invalid_argument("hard instance needs T >= 2");
  const auto layers = static_cast<std::size_t>(b + 1);
  if (num_arms == 0 || num_arms % layers != 0)
    throw std::invalid_argument("K = " + std::to_string(num_arms) + " is not divisible into " +
                                std::to_string(layers) + " equal layers");
  if (!psi.empty()) {
    if (psi.size() != layers) throw std::invalid_argument("need one psi table per layer");
    for (const PsiTable& t : psi)
      if (t.arms() != layer_size()) throw std::invalid_argument("psi size does not match the layer size");
  }
}

std::vector<LayerSpec> HardInstanceSpec::layers() const {
  validate();
  const std::vector<double> deltas = delta_schedule(horizon, passes, b + 1);
  const std::size_t size = layer_size();
  std::vector<LayerSpec> out;
  for (int j = 0; j <= b; ++j) {
    const auto idx = static_cast<std::size_t>(j);
    out.push_back({ArmId(idx * size), size, deltas[idx], psi.empty() ? PsiTable::uniform(size) : psi[idx]});
  }
  return out;
}

BanditInstance sample_hard_instance(const HardInstanceSpec& spec, const Rng& rng) {
  const std::vector<LayerSpec> layers = spec.layers();
  Engine engine = rng.substream(Purpose::Instance);
  std::vector<double> means;
  means.reserve(spec.num_arms);
  Json layer_meta = Json::array();
  Json special = Json::array();
  for (std::size_t j = 0; j < layers.size(); ++j) {
    const LayerSpec& layer = layers[j];
    const LayerDraw draw = sample_layer(layer, engine);
    means.insert(means.end(), draw.means.begin(), draw.means.end());
    layer_meta.push_back(Json::array({layer.first.value, layer.count, layer.delta}));
    special.push_back(Json::array({j + 1, layer.first.index() + draw.special, draw.y}));
  }
  Json meta;
  meta["layers"] = std::move(layer_meta);
  meta["special"] = std::move(special);
  return BanditInstance::bernoulli(means, spec.horizon, std::move(meta));
}

PsiTable psi_from_json(const Json& value, std::size_t arms) {
  if (value.is_string()) {
    if (value.get<std::string>() != "uniform") throw std::invalid_argument("psi must be \"uniform\" or a table");
    return PsiTable::uniform(arms);
  }
  std::vector<std::tuple<std::size_t, int, double>> entries;
  for (const Json& e : value)
    entries.emplace_back(e.at(0).get<std::size_t>(), e.at(1).get<int>(), e.at(2).get<double>());
  return PsiTable::from_entries(arms, entries);
}

HardInstanceSpec hard_spec_from_json(const Json& doc) {
  HardInstanceSpec spec;
  spec.num_arms = doc.at("K").get<std::size_t>();
  spec.horizon = doc.at("T").get<std::uint64_t>();
  spec.passes = doc.at("B").get<int>();
  spec.b = doc.value("b", spec.passes);
  if (spec.b < 0 || spec.num_arms % static_cast<std::size_t>(spec.b + 1) != 0) {
    spec.validate();  // throws with the precise reason
  }
  const Json psi = doc.value("psi", Json("uniform"));
  if (psi.is_string() && psi.get<std::string>() != "uniform")
    throw std::invalid_argument("psi must be \"uniform\" or a table");
  const std::size_t size = spec.num_arms / static_cast<std::size_t>(spec.b + 1);
  const bool per_layer = psi.is_array() && !psi.empty() && psi.at(0).is_array() && !psi.at(0).empty() &&
                         psi.at(0).at(0).is_array();
  if (per_layer) {
    for (const Json& t : psi) spec.psi.push_back(psi_from_json(t, size));
  } else if (!psi.is_string()) {
    spec.psi.assign(static_cast<std::size_t>(spec.b + 1), psi_from_json(psi, size));
  }
  spec.validate();
  return spec;
}

Json hard_spec_to_json(const HardInstanceSpec& spec) {
  Json doc;
  doc["K"] = spec.num_arms;
  doc["T"] = spec.horizon;
  doc["B"] = spec.passes;
  doc["b"] = spec.b;
  if (spec.psi.empty()) {
    doc["psi"] = "uniform";
  } else {
    Json tables = Json::array();
    for (const PsiTable& t : spec.psi) {
      Json cells = Json::array();
      for (std::size_t i = 0; i < t.arms(); ++i)
        for (int y = 0; y <= 1; ++y)
          if (t.p(i, y) > 0.0) cells.push_back(Json::array({i, y, t.p(i, y)}));
      tables.push_back(std::move(cells));
    }
    doc["psi"] = std::move(tables);
  }
  return doc;
}

NearUniformCertificate certify_near_uniform(const PsiTable& psi) {
  const std::size_t arms = psi.arms();
  std::vector<double> marginal(arms);
  double conditional = 0.0;
  for (std::size_t i = 0; i < arms; ++i) {
    marginal[i] = psi.p(i, 0) + psi.p(i, 1);
    if (marginal[i] > 0.0) conditional += marginal[i] * binary_entropy(psi.p(i, 1) / marginal[i]);
  }
  NearUniformCertificate cert;
  cert.entropy_special = entropy(DistributionTable(marginal));
  cert.entropy_bit = conditional;
  // Slack below 1e-12 is rounding in the entropy sums, not a real deficit.
  auto slack = [](double x) { return x < 1e-12 ? 0.0 : x; };
  cert.gamma = std::max(slack(std::log2(static_cast<double>(arms)) - cert.entropy_special),
                        slack(1.0 - cert.entropy_bit));
  return cert;
}

double lower_bound_memory_threshold(std::size_t num_arms, int passes) {
  return static_cast<double>(num_arms) / (8.0 * passes * (passes + 1.0) * std::log2(std::exp(1.0)));
}

}  // namespace sbandit
