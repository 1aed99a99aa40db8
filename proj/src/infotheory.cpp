#include "streambandit/infotheory.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace sbandit {

namespace {
constexpr double kNormTolerance = 1e-12;
constexpr double kInf = std::numeric_limits<double>::infinity();

double plogp_inv(double p) { return p > 0.0 ? -p * std::log2(p) : 0.0; }
}  // namespace

DistributionTable::DistributionTable(std::vector<double> probs) : probs_(std::move(probs)) {
  if (probs_.empty()) throw std::invalid_argument("distribution needs a non-empty support");
  for (double p : probs_)
    if (!(p >= 0.0)) throw std::invalid_argument("negative or NaN probability");
  const double total = std::accumulate(probs_.begin(), probs_.end(), 0.0);
  if (std::abs(total - 1.0) > kNormTolerance) throw std::invalid_argument("probabilities do not sum to 1");
}

DistributionTable DistributionTable::uniform(std::size_t n) {
  return DistributionTable(std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

double entropy(const DistributionTable& table) {
  double h = 0.0;
  for (double p : table.probs()) h += plogp_inv(p);
  return h;
}

double binary_entropy(double p) { return plogp_inv(p) + plogp_inv(1.0 - p); }

double kl(const DistributionTable& p, const DistributionTable& q) {
  if (p.size() != q.size()) throw std::invalid_argument("kl: support sizes differ");
  double d = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] == 0.0) continue;
    if (q[i] == 0.0) return kInf;
    d += p[i] * std::log2(p[i] / q[i]);
  }
  return d < 0.0 ? 0.0 : d;
}

double kl_bernoulli(double p, double q) {
  return kl(DistributionTable({1.0 - p, p}), DistributionTable({1.0 - q, q}));
}

double kl_bernoulli_nats(double p, double q) { return bits_to_nats(kl_bernoulli(p, q)); }

double kl_bernoulli_chi2_bound(double p, double q) {
  if (!(q > 0.0 && q < 1.0)) throw std::invalid_argument("chi-square bound needs 0 < q < 1");
  return (p - q) * (p - q) / (q * (1.0 - q));
}

BoundedMassResult bounded_mass_check(const DistributionTable& table, std::span<const std::size_t> subset) {
  const double support = static_cast<double>(table.size());
  BoundedMassResult r;
  r.beta = static_cast<double>(subset.size()) / support;
  if (r.beta >= 1.0) throw std::invalid_argument("bounded_mass_check needs |S| < |support|");
  std::vector<char> seen(table.size(), 0);
  for (std::size_t i : subset) {
    if (i >= table.size() || seen[i]) throw std::invalid_argument("subset must list distinct support indices");
    seen[i] = 1;
    r.lhs += table[i];
  }
  r.gamma = std::max(0.0, std::log2(support) - entropy(table));
  r.rhs = std::log2(1.0 + r.beta) + r.gamma;
  r.holds = r.lhs <= r.rhs + 1e-12;
  return r;
}

BernoulliEntropyResult bernoulli_entropy_bound_check(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("p must be in [0,1]");
  BernoulliEntropyResult r;
  const double delta = p - 0.5;
  r.deviation = std::abs(delta);
  // 1 - h(1/2 + Δ) = p log2(1 + 2Δ) + (1 - p) log2(1 - 2Δ); this form keeps
  // full relative precision as Δ -> 0 where 1 - h(p) cancels.
  if (p == 0.0 || p == 1.0)
    r.gamma = 1.0;
  else
    r.gamma = std::max(0.0, (p * std::log1p(2.0 * delta) + (1.0 - p) * std::log1p(-2.0 * delta)) / std::log(2.0));
  r.bound = std::sqrt(5.0 * r.gamma * std::log(4.0) / 16.0);
  r.applicable = r.gamma <= 0.25;
  r.holds = !r.applicable || r.deviation <= r.bound;
  return r;
}

}  // namespace sbandit
