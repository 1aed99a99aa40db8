#include <doctest.h>

#include <stdexcept>

#include <cmath>

#include "streambandit/baselines.hpp"
#include "streambandit/harness.hpp"

using namespace sbandit;

TEST_SUITE("baselines") {

TEST_CASE("names round-trip") {
  for (auto k : {BaselineKind::FullMemoryElimination, BaselineKind::SinglePassETC, BaselineKind::UniformRandom})
    CHECK(baseline_from_string(to_string(k)) == k);
  CHECK_THROWS_AS(baseline_from_string("ucb"), std::invalid_argument);
}

TEST_CASE("memory requirements") {
  const auto inst = BanditInstance::bernoulli({0.1, 0.2, 0.3}, 100);
  BaselineConfig c;
  c.memory = 2;
  CHECK_THROWS_AS(run_baseline(BaselineKind::FullMemoryElimination, inst, c, Rng(0)), std::invalid_argument);
  CHECK_THROWS_AS(run_baseline(BaselineKind::UniformRandom, inst, c, Rng(0)), std::invalid_argument);
  CHECK_NOTHROW(run_baseline(BaselineKind::SinglePassETC, inst, c, Rng(0)));
  c.memory = 1;
  CHECK_THROWS_AS(run_baseline(BaselineKind::SinglePassETC, inst, c, Rng(0)), std::invalid_argument);
}

TEST_CASE("exploration length") {
  CHECK(etc_exploration_pulls(1000000, 16) == 2500);
  CHECK(etc_exploration_pulls(1000, 4) == 50);
  CHECK(etc_exploration_pulls(2, 100) == 1);
}

TEST_CASE("uniform play on a flat instance has no regret") {
  BaselineConfig c;
  c.memory = 4;
  const auto rec = run_baseline(BaselineKind::UniformRandom, BanditInstance::bernoulli({0.4, 0.4, 0.4, 0.4}, 5000),
                                c, Rng(3));
  CHECK(rec.regret == 0.0);
  CHECK(rec.trials == 5000);
}

TEST_CASE("every baseline spends exactly T trials and reports consistent pulls") {
  const auto inst = BanditInstance::bernoulli({0.1, 0.5, 0.45, 0.8, 0.3}, 3000);
  for (auto k : {BaselineKind::FullMemoryElimination, BaselineKind::SinglePassETC, BaselineKind::UniformRandom}) {
    BaselineConfig c;
    c.memory = k == BaselineKind::SinglePassETC ? 2 : 5;
    const auto rec = run_baseline(k, inst, c, Rng(9));
    std::uint64_t total = 0;
    double regret = 0;
    for (const auto& p : rec.pulls) {
      total += p.count;
      regret += p.count * instance_gaps(inst)[p.arm.index()];
    }
    CHECK(total == 3000);
    CHECK(rec.regret == doctest::Approx(regret).epsilon(1e-12));
    CHECK(rec.algorithm == to_string(k));
  }
}

TEST_CASE("explore-then-commit keeps the better arm on deterministic tapes") {
  const std::uint64_t T = 1000;
  const auto inst =
      BanditInstance::tapes({std::vector<double>(T, 0.0), std::vector<double>(T, 1.0), std::vector<double>(T, 0.5)}, T);
  BaselineConfig c;
  c.memory = 2;
  std::string transcript;
  RunOptions o;
  o.transcript = &transcript;
  const auto rec = run_baseline(BaselineKind::SinglePassETC, inst, c, Rng(0), o);
  const auto n0 = etc_exploration_pulls(T, 3);
  CHECK(rec.best == ArmId(1));
  CHECK(rec.pulls_of(ArmId(0), 1) == n0);
  CHECK(rec.pulls_of(ArmId(2), 1) == n0);
  CHECK(rec.pulls_of(ArmId(1), 1) == n0);
  CHECK(rec.pulls_of(ArmId(1), 2) == T - 3 * n0);
  CHECK(rec.regret == doctest::Approx(n0 * 1.0 + n0 * 0.5));
}

TEST_CASE("full-memory elimination, K=2, gap 0.5, T=1e4: median regret at most 200") {
  ExperimentConfig cfg;
  cfg.instance.kind = InstanceSource::Kind::Gaps;
  cfg.instance.fixed = gap_instance({0.5}, 0.75, 10000);
  cfg.algorithm.kind = AlgorithmSpec::Kind::Baseline;
  cfg.algorithm.baseline = BaselineKind::FullMemoryElimination;
  cfg.algorithm.baseline_config.memory = 2;
  cfg.horizons = {10000};
  cfg.seeds = 100;
  cfg.master_seed = 1;
  const auto out = run_experiment(cfg);
  CHECK(out.aggregate.rows[0].median <= 200);
}

TEST_CASE("explore-then-commit slope on the hard family") {
  ExperimentConfig cfg;
  cfg.instance.kind = InstanceSource::Kind::Hard;
  cfg.instance.hard.num_arms = 16;
  cfg.instance.hard.passes = 1;
  cfg.instance.hard.b = 1;
  cfg.instance.hard.horizon = 10000;
  cfg.algorithm.kind = AlgorithmSpec::Kind::Baseline;
  cfg.algorithm.baseline = BaselineKind::SinglePassETC;
  cfg.horizons = {10000, 100000, 1000000};
  cfg.seeds = 100;
  cfg.master_seed = 1;
  const auto out = run_experiment(cfg);
  REQUIRE(out.aggregate.fit.has_value());
  CHECK(out.aggregate.fit->slope >= 0.6);
  CHECK(out.aggregate.fit->slope <= 0.75);
}

}
