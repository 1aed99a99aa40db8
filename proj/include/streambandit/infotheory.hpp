#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace sbandit {

// Finite probability vector over a labeled support {0..n-1}.
class DistributionTable {
 public:
  // Entries must be >= 0 and sum to 1 within 1e-12.
  explicit DistributionTable(std::vector<double> probs);
  static DistributionTable uniform(std::size_t n);

  std::size_t size() const { return probs_.size(); }
  double operator[](std::size_t i) const { return probs_[i]; }
  std::span<const double> probs() const { return probs_; }

 private:
  std::vector<double> probs_;
};

// All information quantities are in bits unless the name says otherwise.
double entropy(const DistributionTable& table);
double binary_entropy(double p);

// D(p || q) between tables of the same size; +inf when q puts zero mass where
// p does not.
double kl(const DistributionTable& p, const DistributionTable& q);
double kl_bernoulli(double p, double q);
double kl_bernoulli_nats(double p, double q);

// (p - q)^2 / (q (1 - q)); needs 0 < q < 1. Upper-bounds the Bernoulli KL in
// nats.
double kl_bernoulli_chi2_bound(double p, double q);

constexpr double bits_to_nats(double bits) { return bits * 0.69314718055994530942; }
constexpr double nats_to_bits(double nats) { return nats / 0.69314718055994530942; }

struct BoundedMassResult {
  double lhs = 0.0;  // Pr(A in S)
  double rhs = 0.0;  // log2(1 + beta) + gamma
  double beta = 0.0;
  double gamma = 0.0;  // log2 |support| - H(A)
  bool holds = false;
};

// Mass of a high-entropy variable on a small set: Pr(A in S) <= log2(1+β) + γ
// with β = |S| / |support| < 1. `subset` lists distinct support indices.
// Equality is attainable, so `holds` allows 1e-12 of rounding.
BoundedMassResult bounded_mass_check(const DistributionTable& table, std::span<const std::size_t> subset);

struct BernoulliEntropyResult {
  double gamma = 0.0;      // 1 - H(Bern(p))
  double deviation = 0.0;  // |p - 1/2|
  double bound = 0.0;      // sqrt(5 γ ln 4 / 16)
  bool applicable = false; // γ <= 1/4
  bool holds = false;      // vacuously true when not applicable
};

BernoulliEntropyResult bernoulli_entropy_bound_check(double p);

}  // namespace sbandit
