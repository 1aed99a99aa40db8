#include "streambandit/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>

#include <omp.h>

namespace sbandit {

std::size_t InstanceSource::arms() const {
  switch (kind) {
    case Kind::File:
    case Kind::Gaps: return fixed ? fixed->num_arms() : 0;
    case Kind::Hard: return hard.num_arms;
    case Kind::RandomMeans: return num_arms;
  }
  return 0;
}

BanditInstance gap_instance(const std::vector<double>& gaps, double best_mean, std::uint64_t horizon) {
  std::vector<double> means{best_mean};
  for (double g : gaps) means.push_back(best_mean - g);
  return BanditInstance::bernoulli(means, horizon);
}

std::string AlgorithmSpec::label() const {
  return kind == Kind::Mbse ? "mbse" : to_string(baseline);
}

std::size_t AlgorithmSpec::memory() const {
  return kind == Kind::Mbse ? mbse.memory : baseline_config.memory;
}

int AlgorithmSpec::passes() const { return kind == Kind::Mbse ? mbse.passes : 1; }

std::optional<int> AlgorithmSpec::mode() const {
  if (kind != Kind::Mbse) return std::nullopt;
  return static_cast<int>(mbse.mode);
}

void ExperimentConfig::validate() const {
  if (seeds < 1) throw ConfigError("seeds must be >= 1");
  if (horizons.empty()) throw ConfigError("T sweep is empty");
  for (std::size_t i = 1; i < horizons.size(); ++i)
    if (horizons[i] <= horizons[i - 1]) throw ConfigError("T sweep must be strictly increasing");
  if (horizons.front() < 2) throw ConfigError("horizons must be >= 2");
  if (instance.arms() == 0) throw ConfigError("instance has no arms");
  try {
    if (algorithm.kind == AlgorithmSpec::Kind::Mbse) {
      algorithm.mbse.validate();
    } else if (algorithm.baseline_config.memory < baseline_min_memory(algorithm.baseline, instance.arms())) {
      throw std::invalid_argument(std::string(to_string(algorithm.baseline)) + " needs more memory");
    }
    if (instance.kind == InstanceSource::Kind::Hard) instance.hard.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

namespace {

template <class T>
T field(const Json& doc, const char* key) {
  if (!doc.contains(key)) throw ConfigError(std::string("missing field \"") + key + "\"");
  try {
    return doc.at(key).get<T>();
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("bad field \"") + key + "\": " + e.what());
  }
}

InstanceSource instance_source_from_json(const Json& doc, std::uint64_t first_horizon,
                                         const std::filesystem::path& base_dir) {
  InstanceSource src;
  const std::string kind = field<std::string>(doc, "kind");
  if (kind == "file") {
    src.kind = InstanceSource::Kind::File;
    std::filesystem::path path = field<std::string>(doc, "path");
    if (path.is_relative()) path = base_dir / path;
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read instance file " + path.string());
    try {
      src.fixed = instance_from_json(Json::parse(in));
    } catch (const std::exception& e) {
      throw ConfigError("bad instance file " + path.string() + ": " + e.what());
    }
  } else if (kind == "hard") {
    src.kind = InstanceSource::Kind::Hard;
    Json spec = doc;
    spec["T"] = first_horizon;
    try {
      src.hard = hard_spec_from_json(spec);
    } catch (const std::exception& e) {
      throw ConfigError(std::string("bad hard-instance spec: ") + e.what());
    }
  } else if (kind == "gaps") {
    src.kind = InstanceSource::Kind::Gaps;
    try {
      src.fixed = gap_instance(field<std::vector<double>>(doc, "gaps"), doc.value("best_mean", 0.7), first_horizon);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  } else if (kind == "random_means") {
    src.kind = InstanceSource::Kind::RandomMeans;
    src.num_arms = field<std::size_t>(doc, "K");
  } else {
    throw ConfigError("unknown instance kind \"" + kind + "\"");
  }
  return src;
}

AlgorithmSpec algorithm_from_json(const Json& doc) {
  AlgorithmSpec spec;
  const std::string kind = field<std::string>(doc, "kind");
  if (kind == "mbse") {
    spec.kind = AlgorithmSpec::Kind::Mbse;
    const int w = doc.value("w", 1);
    if (w != 0 && w != 1) throw ConfigError("w must be 0 or 1");
    spec.mbse.mode = static_cast<RegretMode>(w);
    spec.mbse.memory = field<std::size_t>(doc, "M");
    spec.mbse.passes = field<int>(doc, "B");
    spec.mbse.c = doc.value("c", 5.0);
    const std::string base = doc.value("log_base", std::string("e"));
    if (base != "e" && base != "2") throw ConfigError("log_base must be \"e\" or \"2\"");
    spec.mbse.log_base = base == "e" ? LogBase::Natural : LogBase::Two;
  } else {
    spec.kind = AlgorithmSpec::Kind::Baseline;
    try {
      spec.baseline = baseline_from_string(kind);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
    spec.baseline_config.memory = field<std::size_t>(doc, "M");
    spec.baseline_config.c = doc.value("c", 2.0);
  }
  return spec;
}

}  // namespace

ExperimentConfig experiment_from_json(const Json& doc, const std::filesystem::path& base_dir) {
  if (!doc.is_object()) throw ConfigError("experiment config must be a JSON object");
  ExperimentConfig config;
  config.name = doc.value("name", std::string("experiment"));
  config.horizons = field<std::vector<std::uint64_t>>(doc, "T");
  if (config.horizons.empty()) throw ConfigError("T sweep is empty");
  if (!doc.contains("instance")) throw ConfigError("missing field \"instance\"");
  if (!doc.contains("algorithm")) throw ConfigError("missing field \"algorithm\"");
  config.instance = instance_source_from_json(doc.at("instance"), config.horizons.front(), base_dir);
  config.algorithm = algorithm_from_json(doc.at("algorithm"));
  config.seeds = doc.value("seeds", std::size_t{1});
  config.master_seed = doc.value("master_seed", std::uint64_t{0});
  const std::string order = doc.value("order", std::string("fixed"));
  if (order == "fixed")
    config.order = OrderPolicy::Fixed;
  else if (order == "shuffle")
    config.order = OrderPolicy::Shuffle;
  else
    throw ConfigError("order must be \"fixed\" or \"shuffle\"");
  if (doc.contains("slope_band")) {
    const auto band = field<std::vector<double>>(doc, "slope_band");
    if (band.size() != 2 || !(band[0] <= band[1])) throw ConfigError("slope_band must be [lo, hi]");
    config.slope_band = {band[0], band[1]};
  }
  config.validate();
  return config;
}

// ---------------------------------------------------------------------------

BanditInstance seed_instance(const ExperimentConfig& config, std::uint64_t horizon, std::size_t seed_index) {
  const Rng rng = Rng(config.master_seed).child(Purpose::Seed, seed_index);
  const InstanceSource& src = config.instance;
  switch (src.kind) {
    case InstanceSource::Kind::File:
    case InstanceSource::Kind::Gaps: return src.fixed->with_horizon(horizon);
    case InstanceSource::Kind::Hard: {
      HardInstanceSpec spec = src.hard;
      spec.horizon = horizon;
      return sample_hard_instance(spec, rng);
    }
    case InstanceSource::Kind::RandomMeans: {
      Engine engine = rng.substream(Purpose::Instance);
      std::vector<double> means(src.num_arms);
      for (double& m : means) m = uniform01(engine);
      return BanditInstance::bernoulli(means, horizon);
    }
  }
  throw ConfigError("unknown instance source");
}

RunRecord run_single(const ExperimentConfig& config, std::uint64_t horizon, std::size_t seed_index) {
  const Rng rng = Rng(config.master_seed).child(Purpose::Seed, seed_index);
  const BanditInstance instance = seed_instance(config, horizon, seed_index);
  RunOptions options;
  if (config.order == OrderPolicy::Shuffle) options.order = StreamOrder::per_pass_shuffle(rng.seed());
  RunRecord record = config.algorithm.kind == AlgorithmSpec::Kind::Mbse
                         ? run_mbse(instance, config.algorithm.mbse, rng, options)
                         : run_baseline(config.algorithm.baseline, instance, config.algorithm.baseline_config, rng,
                                        options);
  record.seed = seed_index;
  return record;
}

std::vector<RunRecord> run_seeds(const ExperimentConfig& config, std::uint64_t horizon, int threads) {
  const auto n = static_cast<long>(config.seeds);
  std::vector<RunRecord> records(config.seeds);
  std::exception_ptr failure;
  const int team = threads > 0 ? threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(team)
  for (long s = 0; s < n; ++s) {
    try {
      records[static_cast<std::size_t>(s)] = run_single(config, horizon, static_cast<std::size_t>(s));
    } catch (...) {
#pragma omp critical(sbandit_seed_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return records;
}

std::vector<RunRecord> run_seeds_serial(const ExperimentConfig& config, std::uint64_t horizon) {
  std::vector<RunRecord> records;
  records.reserve(config.seeds);
  for (std::size_t s = 0; s < config.seeds; ++s) records.push_back(run_single(config, horizon, s));
  return records;
}

double percentile(std::vector<double> values, double q) {
  if (values.empty()) throw std::invalid_argument("percentile of an empty sample");
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (pos - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

AggregateRow aggregate_records(const ExperimentConfig& config, std::uint64_t horizon,
                               std::span<const RunRecord> records) {
  if (records.empty()) throw std::invalid_argument("no records to aggregate");
  AggregateRow row;
  row.algorithm = config.algorithm.label();
  row.horizon = horizon;
  row.num_arms = records.front().num_arms;
  row.passes = config.algorithm.passes();
  row.memory = config.algorithm.memory();
  row.mode = config.algorithm.mode();
  row.seeds = records.size();
  std::vector<double> regrets;
  std::size_t violations = 0;
  for (const RunRecord& r : records) {
    if (r.num_arms != row.num_arms) throw ConfigError("inconsistent K across seeds");
    regrets.push_back(r.regret);
    violations += r.violations ? 1 : 0;
  }
  row.mean_regret = std::accumulate(regrets.begin(), regrets.end(), 0.0) / static_cast<double>(regrets.size());
  row.median = percentile(regrets, 0.5);
  row.p5 = percentile(regrets, 0.05);
  row.p95 = percentile(regrets, 0.95);
  row.violation_rate = static_cast<double>(violations) / static_cast<double>(records.size());
  return row;
}

ExperimentOutput run_experiment(const ExperimentConfig& config, const ExecutionOptions& exec,
                                const std::optional<std::filesystem::path>& out_dir) {
  config.validate();
  ExperimentOutput out;
  for (std::uint64_t horizon : config.horizons) {
    out.records.push_back(exec.parallel ? run_seeds(config, horizon, exec.threads)
                                        : run_seeds_serial(config, horizon));
    out.aggregate.rows.push_back(aggregate_records(config, horizon, out.records.back()));
    if (out.aggregate.rows.back().num_arms != out.aggregate.rows.front().num_arms)
      throw ConfigError("inconsistent K across the T sweep");
  }
  if (config.horizons.size() >= 3) {
    std::vector<std::pair<double, double>> points;
    for (const AggregateRow& row : out.aggregate.rows)
      points.emplace_back(static_cast<double>(row.horizon), row.mean_regret);
    // Zero mean regret has no logarithm; leave the fit empty in that case.
    if (std::all_of(points.begin(), points.end(), [](const auto& p) { return p.second > 0.0; }))
      out.aggregate.fit = fit_slope(points);
  }
  if (out_dir) {
    std::filesystem::create_directories(*out_dir);
    std::ofstream records(*out_dir / "records.jsonl");
    for (const auto& per_horizon : out.records) write_records_jsonl(records, per_horizon);
    std::ofstream csv(*out_dir / "aggregate.csv");
    csv << to_csv(out.aggregate.rows);
    if (!records || !csv) throw std::runtime_error("failed writing results to " + out_dir->string());
  }
  return out;
}

SlopeFit fit_slope(std::span<const std::pair<double, double>> points) {
  if (points.size() < 3) throw std::invalid_argument("slope fit needs at least 3 points");
  std::vector<double> xs, ys;
  for (const auto& [t, r] : points) {
    if (!(t > 0.0) || !(r > 0.0)) throw std::invalid_argument("slope fit needs positive T and regret");
    xs.push_back(std::log(t));
    ys.push_back(std::log(r));
  }
  const double n = static_cast<double>(xs.size());
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  if (sxx == 0.0) throw std::invalid_argument("slope fit needs distinct horizons");
  SlopeFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  for (std::size_t i = 0; i < xs.size(); ++i)
    fit.max_residual = std::max(fit.max_residual, std::abs(ys[i] - (fit.intercept + fit.slope * xs[i])));
  return fit;
}

// ---------------------------------------------------------------------------

const char* const kCsvHeader = "algorithm,T,K,B,M,w,seeds,mean_regret,median,p5,p95,violation_rate";

std::string to_csv(std::span<const AggregateRow> rows) {
  std::string out = std::string(kCsvHeader) + "\n";
  char buf[512];
  for (const AggregateRow& r : rows) {
    const std::string w = r.mode ? std::to_string(*r.mode) : "";
    std::snprintf(buf, sizeof buf, "%s,%llu,%zu,%d,%zu,%s,%zu,%.6f,%.6f,%.6f,%.6f,%.6f\n", r.algorithm.c_str(),
                  static_cast<unsigned long long>(r.horizon), r.num_arms, r.passes, r.memory, w.c_str(), r.seeds,
                  r.mean_regret, r.median, r.p5, r.p95, r.violation_rate);
    out += buf;
  }
  return out;
}

std::vector<AggregateRow> rows_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) throw std::invalid_argument("unexpected CSV header");
  std::vector<AggregateRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    if (cells.size() != 12) throw std::invalid_argument("CSV row has " + std::to_string(cells.size()) + " columns");
    try {
      AggregateRow r;
      r.algorithm = cells[0];
      r.horizon = std::stoull(cells[1]);
      r.num_arms = std::stoul(cells[2]);
      r.passes = std::stoi(cells[3]);
      r.memory = std::stoul(cells[4]);
      if (!cells[5].empty()) r.mode = std::stoi(cells[5]);
      r.seeds = std::stoul(cells[6]);
      r.mean_regret = std::stod(cells[7]);
      r.median = std::stod(cells[8]);
      r.p5 = std::stod(cells[9]);
      r.p95 = std::stod(cells[10]);
      r.violation_rate = std::stod(cells[11]);
      rows.push_back(std::move(r));
    } catch (const std::logic_error&) {
      throw std::invalid_argument("malformed CSV row: " + line);
    }
  }
  return rows;
}

void write_records_jsonl(std::ostream& out, std::span<const RunRecord> records) {
  for (const RunRecord& r : records) out << run_record_to_json(r).dump() << '\n';
}

std::vector<RunRecord> read_records_jsonl(std::istream& in) {
  std::vector<RunRecord> records;
  std::string line;
  while (std::getline(in, line))
    if (!line.empty()) records.push_back(run_record_from_json(Json::parse(line)));
  return records;
}

}  // namespace sbandit
