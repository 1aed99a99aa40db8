// Acceptance gate. One PASS/FAIL line per criterion; exit status 1 if any
// selected criterion fails.
//
//   acceptance                 run all criteria
//   acceptance --criterion N   run criterion N only

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <functional>
#include <algorithm>
#include <random>
#include <string>
#include <vector>

#include "env_fuzz.hpp"
#include "reference_mbse.hpp"
#include "streambandit/harness.hpp"
#include "streambandit/infotheory.hpp"

using namespace sbandit;

namespace {

constexpr std::uint64_t kMasterSeed = 1;

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

ExperimentConfig hard_mbse(std::size_t K, int B, std::vector<std::uint64_t> horizons) {
  ExperimentConfig c;
  c.instance.kind = InstanceSource::Kind::Hard;
  c.instance.hard.num_arms = K;
  c.instance.hard.horizon = horizons.front();
  c.instance.hard.passes = B;
  c.instance.hard.b = B;
  c.algorithm.kind = AlgorithmSpec::Kind::Mbse;
  c.algorithm.mbse.mode = RegretMode::WorstCase;
  c.algorithm.mbse.memory = 3;
  c.algorithm.mbse.passes = B;
  c.horizons = std::move(horizons);
  c.seeds = 100;
  c.master_seed = kMasterSeed;
  return c;
}

std::string rows_summary(const AggregateResult& agg) {
  std::string s;
  for (const auto& r : agg.rows) s += fmt(" T=%llu:%.1f", static_cast<unsigned long long>(r.horizon), r.mean_regret);
  return s;
}

Verdict slope_criterion(std::size_t K, int B, double lo, double hi) {
  const auto out = run_experiment(hard_mbse(K, B, {10000, 100000, 1000000}));
  if (!out.aggregate.fit) return {false, "no slope (zero mean regret somewhere)" + rows_summary(out.aggregate)};
  const double slope = out.aggregate.fit->slope;
  return {slope >= lo && slope <= hi,
          fmt("slope %.4f, band [%.2f, %.2f];", slope, lo, hi) + " mean regret" + rows_summary(out.aggregate)};
}

Verdict criterion1() { return slope_criterion(16, 1, 0.60, 0.75); }
Verdict criterion2() { return slope_criterion(18, 2, 0.52, 0.66); }

Verdict criterion3() {
  const std::uint64_t T = 1000000;
  auto mbse2 = hard_mbse(18, 2, {T});
  auto mbse1 = mbse2;
  mbse1.algorithm.mbse.passes = 1;
  auto etc = mbse2;
  etc.algorithm.kind = AlgorithmSpec::Kind::Baseline;
  etc.algorithm.baseline = BaselineKind::SinglePassETC;
  etc.algorithm.baseline_config.memory = 2;
  const double r2 = run_experiment(mbse2).aggregate.rows[0].mean_regret;
  const double r1 = run_experiment(mbse1).aggregate.rows[0].mean_regret;
  const double re = run_experiment(etc).aggregate.rows[0].mean_regret;
  const double fe = re / r2, f1 = r1 / r2;
  return {fe >= 1.5 && f1 >= 1.5,
          fmt("mbse(B=2) %.1f, etc %.1f (x%.3f), mbse(B=1) %.1f (x%.3f), need x1.5 each", r2, re, fe, r1, f1)};
}

Verdict criterion4() {
  double worst = 0;
  int checked = 0;
  for (int B = 1; B <= 20; ++B) {
    for (double T = 1e3; T <= 1e8 * 1.0000001; T *= 10) {
      const auto t = static_cast<std::uint64_t>(std::llround(T));
      const double td = static_cast<double>(t);
      const double w1 = cap_schedule(t, B, RegretMode::WorstCase).back();
      const double w0 = cap_schedule(t, B, RegretMode::InstanceDependent).back();
      const double e1 = std::abs(w1 / std::pow(td, 1.0 - 1.0 / (std::ldexp(1.0, B + 1) - 1.0)) - 1.0);
      const double e0 = std::abs(w0 / std::pow(td, B / (B + 1.0)) - 1.0);
      worst = std::max({worst, e1, e0});
      checked += 2;
    }
  }
  return {worst <= 1e-9, fmt("%d closed forms, max relative error %.3e (limit 1e-9)", checked, worst)};
}

Verdict criterion5() {
  ExperimentConfig c;
  c.instance.kind = InstanceSource::Kind::RandomMeans;
  c.instance.num_arms = 8;
  c.algorithm.kind = AlgorithmSpec::Kind::Mbse;
  c.algorithm.mbse.mode = RegretMode::WorstCase;
  c.algorithm.mbse.memory = 3;
  c.algorithm.mbse.passes = 2;
  c.horizons = {10000};
  c.seeds = 500;
  c.master_seed = kMasterSeed;
  const double rate = run_experiment(c).aggregate.rows[0].violation_rate;
  return {rate <= 0.05, fmt("violation fraction %.4f over 500 runs (limit 0.05)", rate)};
}

Verdict criterion6() {
  std::mt19937_64 gen(kMasterSeed);
  int runs = 0, mismatches = 0;
  std::string first;
  for (std::size_t K : {2, 3, 4})
    for (std::uint64_t T : {10, 30, 100})
      for (std::size_t M : {2, 3})
        for (int B : {1, 2})
          for (int w : {0, 1})
            for (int rep = 0; rep < 20; ++rep) {
              std::vector<std::vector<double>> tapes(K, std::vector<double>(T));
              for (auto& tape : tapes) {
                const bool binary = rep % 2 == 0;
                const double p = std::uniform_real_distribution<double>(0, 1)(gen);
                for (double& x : tape)
                  x = binary ? (std::bernoulli_distribution(p)(gen) ? 1.0 : 0.0)
                             : std::uniform_real_distribution<double>(0, 1)(gen);
              }
              MbseConfig config;
              config.mode = static_cast<RegretMode>(w);
              config.memory = M;
              config.passes = B;
              std::string got;
              RunOptions options;
              options.transcript = &got;
              run_mbse(BanditInstance::tapes(tapes, T), config, Rng(0), options);
              const std::string want = reference::simulate(tapes, T, {M, B, w, 5.0});
              ++runs;
              if (got != want && mismatches++ == 0)
                first = fmt(" first: K=%zu T=%llu M=%zu B=%d w=%d", K, static_cast<unsigned long long>(T), M, B, w);
            }
  return {mismatches == 0, fmt("%d of %d transcripts differ from the reference", mismatches, runs) + first};
}

Verdict criterion7() {
  std::uint64_t actions = 0, rejected = 0, escaped = 0;
  std::string first;
  for (std::uint64_t seed = 0; seed < 10000; ++seed) {
    const auto out = fuzz::run_sequence(derive_seed(kMasterSeed, Purpose::Policy, seed), 80);
    actions += out.actions;
    rejected += out.rejected;
    if (out.escaped && escaped == 0) first = " first: " + out.first_escape;
    escaped += out.escaped;
  }
  return {escaped == 0,
          fmt("10000 sequences, %llu actions, %llu illegal actions refused, %llu escapes",
              static_cast<unsigned long long>(actions), static_cast<unsigned long long>(rejected),
              static_cast<unsigned long long>(escaped)) +
              first};
}

Verdict criterion8() {
  std::mt19937_64 gen(kMasterSeed);
  int mass_violations = 0;
  double tightest = -1e300;
  for (int t = 0; t < 10000; ++t) {
    const std::size_t n = 1 + gen() % 8;
    std::vector<double> p(n);
    double total = 0;
    // Mix smooth and spiky tables so both low- and high-entropy cases appear.
    const double shape = (t % 3 == 0) ? 0.2 : 1.0;
    for (double& x : p) total += (x = std::gamma_distribution<double>(shape, 1.0)(gen));
    if (!(total > 0)) {
      p.assign(n, 1.0);
      total = double(n);
    }
    for (double& x : p) x /= total;
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = i;
    std::shuffle(idx.begin(), idx.end(), gen);
    idx.resize(gen() % n);
    const auto r = bounded_mass_check(DistributionTable(p), idx);
    if (!r.holds) ++mass_violations;
    tightest = std::max(tightest, r.lhs - r.rhs);
  }
  int bern_violations = 0, applicable = 0;
  for (int i = 0; i < 10000; ++i) {
    const double p = 0.3 + 0.4 * i / 9999.0;
    const auto r = bernoulli_entropy_bound_check(p);
    applicable += r.applicable ? 1 : 0;
    if (!r.holds) ++bern_violations;
  }
  return {mass_violations == 0 && bern_violations == 0,
          fmt("bounded-mass violations %d/10000 (max lhs-rhs %.3e), Bernoulli-entropy violations %d/10000 "
              "(%d with gamma <= 1/4)",
              mass_violations, tightest, bern_violations, applicable)};
}

Verdict criterion9() {
  const std::uint64_t T = 1000000;
  const int B = 10;
  std::vector<double> gaps;
  for (int j = 0; j < 9; ++j) gaps.push_back(0.3 - j * (0.25 / 8));
  ExperimentConfig c;
  c.instance.kind = InstanceSource::Kind::Gaps;
  c.instance.fixed = gap_instance(gaps, 0.7, T);
  c.algorithm.kind = AlgorithmSpec::Kind::Mbse;
  c.algorithm.mbse.memory = 3;
  c.algorithm.mbse.passes = B;
  c.horizons = {T};
  c.seeds = 100;
  c.master_seed = kMasterSeed;
  c.algorithm.mbse.mode = RegretMode::InstanceDependent;
  const double r0 = run_experiment(c).aggregate.rows[0].mean_regret;
  c.algorithm.mbse.mode = RegretMode::WorstCase;
  const double r1 = run_experiment(c).aggregate.rows[0].mean_regret;

  const double t = static_cast<double>(T), lt = std::log(t);
  double sum = 0;
  for (double d : gaps) sum += (std::pow(t, 1.0 / (B + 1)) * lt + B * std::log(d * d * t / lt)) / d;
  const double bound = 50 * sum;
  return {r0 <= bound && r0 < r1,
          fmt("w=0 mean regret %.1f, bound %.1f, w=1 mean regret %.1f (need w=0 <= bound and w=0 < w=1)", r0, bound, r1)};
}

const std::vector<std::function<Verdict()>> kCriteria{criterion1, criterion2, criterion3, criterion4, criterion5,
                                                      criterion6, criterion7, criterion8, criterion9};

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) {
      only = std::atoi(argv[++i]);
    } else {
      std::fprintf(stderr, "usage: %s [--criterion N]\n", argv[0]);
      return 2;
    }
  }
  if (only < 0 || only > static_cast<int>(kCriteria.size())) {
    std::fprintf(stderr, "criterion must be 1..%zu\n", kCriteria.size());
    return 2;
  }
  bool all = true;
  for (int n = 1; n <= static_cast<int>(kCriteria.size()); ++n) {
    if (only && n != only) continue;
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = kCriteria[n - 1]();
    } catch (const std::exception& e) {
      v = {false, std::string("threw: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("criterion %d: %s  %s  [%.1fs]\n", n, v.pass ? "PASS" : "FAIL", v.detail.c_str(), secs);
    std::fflush(stdout);
    all = all && v.pass;
  }
  return all ? 0 : 1;
}
