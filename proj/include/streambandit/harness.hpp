#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "streambandit/baselines.hpp"
#include "streambandit/hard_instances.hpp"
#include "streambandit/instance.hpp"
#include "streambandit/mbse.hpp"
#include "streambandit/run_record.hpp"

namespace sbandit {

// Malformed or inconsistent experiment configuration (CLI exit code 2).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct InstanceSource {
  enum class Kind { File, Hard, Gaps, RandomMeans };
  Kind kind = Kind::Gaps;
  std::optional<BanditInstance> fixed;  // File / Gaps; horizon replaced per sweep point
  HardInstanceSpec hard;                // Hard; fresh draw per seed and horizon
  std::size_t num_arms = 0;             // RandomMeans; means ~ U[0,1] per seed

  std::size_t arms() const;
};

// One optimal arm with mean `best_mean`, the rest at best_mean - gap.
BanditInstance gap_instance(const std::vector<double>& gaps, double best_mean, std::uint64_t horizon);

struct AlgorithmSpec {
  enum class Kind { Mbse, Baseline };
  Kind kind = Kind::Mbse;
  MbseConfig mbse;
  BaselineKind baseline = BaselineKind::SinglePassETC;
  BaselineConfig baseline_config;

  std::string label() const;
  std::size_t memory() const;
  int passes() const;
  std::optional<int> mode() const;
};

enum class OrderPolicy { Fixed, Shuffle };

struct ExperimentConfig {
  std::string name;
  InstanceSource instance;
  AlgorithmSpec algorithm;
  std::vector<std::uint64_t> horizons;
  std::size_t seeds = 1;
  std::uint64_t master_seed = 0;
  OrderPolicy order = OrderPolicy::Fixed;
  std::optional<std::pair<double, double>> slope_band;

  void validate() const;
};

// Relative instance file paths resolve against base_dir.
ExperimentConfig experiment_from_json(const Json& doc, const std::filesystem::path& base_dir = {});

struct AggregateRow {
  std::string algorithm;
  std::uint64_t horizon = 0;
  std::size_t num_arms = 0;
  int passes = 1;
  std::size_t memory = 0;
  std::optional<int> mode;
  std::size_t seeds = 0;
  double mean_regret = 0.0;
  double median = 0.0;
  double p5 = 0.0;
  double p95 = 0.0;
  double violation_rate = 0.0;

  friend bool operator==(const AggregateRow&, const AggregateRow&) = default;
};

struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;
  double max_residual = 0.0;
};

struct AggregateResult {
  std::vector<AggregateRow> rows;
  std::optional<SlopeFit> fit;  // only for sweeps of >= 3 horizons
};

struct ExecutionOptions {
  bool parallel = true;
  int threads = 0;  // 0 = OpenMP default
};

// The instance and rewards of seed i depend only on (master_seed, i, T).
BanditInstance seed_instance(const ExperimentConfig& config, std::uint64_t horizon, std::size_t seed_index);
RunRecord run_single(const ExperimentConfig& config, std::uint64_t horizon, std::size_t seed_index);

// OpenMP fan-out over seeds, and the plain loop it must agree with.
std::vector<RunRecord> run_seeds(const ExperimentConfig& config, std::uint64_t horizon, int threads = 0);
std::vector<RunRecord> run_seeds_serial(const ExperimentConfig& config, std::uint64_t horizon);

// Type-7 (linear interpolation) percentile, q in [0, 1].
double percentile(std::vector<double> values, double q);

AggregateRow aggregate_records(const ExperimentConfig& config, std::uint64_t horizon,
                               std::span<const RunRecord> records);

struct ExperimentOutput {
  AggregateResult aggregate;
  std::vector<std::vector<RunRecord>> records;  // [horizon index][seed]
};

// When out_dir is set, writes records.jsonl (per-seed) and aggregate.csv.
ExperimentOutput run_experiment(const ExperimentConfig& config, const ExecutionOptions& exec = {},
                                const std::optional<std::filesystem::path>& out_dir = std::nullopt);

// Least squares of ln(regret) on ln(T). Needs >= 3 points, all positive.
SlopeFit fit_slope(std::span<const std::pair<double, double>> points);

extern const char* const kCsvHeader;
std::string to_csv(std::span<const AggregateRow> rows);
std::vector<AggregateRow> rows_from_csv(const std::string& text);

void write_records_jsonl(std::ostream& out, std::span<const RunRecord> records);
std::vector<RunRecord> read_records_jsonl(std::istream& in);

}  // namespace sbandit
