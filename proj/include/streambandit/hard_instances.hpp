#pragma once

#include <cstdint>
#include <optional>
#include <tuple>
#include <utility>
#include <vector>

#include "streambandit/instance.hpp"
#include "streambandit/rng.hpp"

namespace sbandit {

// Joint law of (special arm offset, reward bit) over A x {0,1}, stored as
// p[2*i + y].
class PsiTable {
 public:
  static PsiTable uniform(std::size_t arms);
  static PsiTable point_mass(std::size_t arms, std::size_t special, int y);
  // Entries (i, y, p); unspecified cells are 0. Throws unless the entries
  // are non-negative and sum to 1 within 1e-12.
  static PsiTable from_entries(std::size_t arms, const std::vector<std::tuple<std::size_t, int, double>>& entries);

  std::size_t arms() const { return probs_.size() / 2; }
  double p(std::size_t special, int y) const { return probs_.at(2 * special + static_cast<std::size_t>(y)); }
  const std::vector<double>& cells() const { return probs_; }

  std::pair<std::size_t, int> sample(Engine& engine) const;

 private:
  explicit PsiTable(std::vector<double> probs);
  std::vector<double> probs_;
};

struct LayerSpec {
  ArmId first;
  std::size_t count = 0;
  double delta = 0.0;
  PsiTable psi = PsiTable::uniform(1);
};

struct LayerDraw {
  std::vector<double> means;  // over the layer's arms, in id order
  std::size_t special = 0;    // offset within the layer
  int y = 0;
};

// One draw of the single-layer family: the special arm gets mean 1/2 + y*delta,
// every other arm 1/2. delta must be <= 1/4.
LayerDraw sample_layer(const LayerSpec& spec, Engine& engine);

// Gap parameters Δ_1..Δ_layers with Δ_j = T^{-(2^B - 2^{j-1})/(2^{B+1}-1)} / 4.
std::vector<double> delta_schedule(std::uint64_t horizon, int passes, int layers);

struct HardInstanceSpec {
  std::size_t num_arms = 0;
  std::uint64_t horizon = 0;
  int passes = 1;
  int b = 1;                      // the instance has b+1 layers
  std::vector<PsiTable> psi;      // one per layer; empty = uniform everywhere

  void validate() const;
  std::size_t layer_size() const { return num_arms / static_cast<std::size_t>(b + 1); }
  std::vector<LayerSpec> layers() const;
};

// Layers drawn independently; meta records {"layers":[[first,count,delta],...],
// "special":[[j,arm,y],...]} with j 1-based and arm a global id.
BanditInstance sample_hard_instance(const HardInstanceSpec& spec, const Rng& rng);

HardInstanceSpec hard_spec_from_json(const Json& doc);
Json hard_spec_to_json(const HardInstanceSpec& spec);
PsiTable psi_from_json(const Json& value, std::size_t arms);

struct NearUniformCertificate {
  double gamma = 0.0;          // smallest γ for which ψ is γ-nearly uniform
  double entropy_special = 0;  // H(I), bits
  double entropy_bit = 0;      // H(Y | I), bits
};

NearUniformCertificate certify_near_uniform(const PsiTable& psi);

// K / (8 B (B+1) log2 e): the memory below which the layered family forces
// the lower-bound regret.
double lower_bound_memory_threshold(std::size_t num_arms, int passes);

}  // namespace sbandit
