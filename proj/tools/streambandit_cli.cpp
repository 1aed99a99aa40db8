#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <tuple>

#include <CLI11.hpp>

#include "streambandit/hard_instances.hpp"
#include "streambandit/harness.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitBand = 3;

sbandit::Json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw sbandit::ConfigError("cannot read " + path.string());
  try {
    return sbandit::Json::parse(in);
  } catch (const sbandit::Json::parse_error& e) {
    throw sbandit::ConfigError(path.string() + ": " + e.what());
  }
}

void print_fit(const sbandit::SlopeFit& fit) {
  std::printf("slope %.6f intercept %.6f max_residual %.6f\n", fit.slope, fit.intercept, fit.max_residual);
}

struct RunArgs {
  std::string config;
  std::string out;
  std::optional<std::size_t> seeds;
  std::optional<std::uint64_t> master_seed;
  int threads = 0;
  bool serial = false;
  bool assert_bands = false;
};

int cmd_run(const RunArgs& args) {
  const std::filesystem::path path(args.config);
  sbandit::ExperimentConfig config = sbandit::experiment_from_json(read_json(path), path.parent_path());
  if (args.seeds) config.seeds = *args.seeds;
  if (args.master_seed) config.master_seed = *args.master_seed;
  config.validate();

  sbandit::ExecutionOptions exec;
  exec.parallel = !args.serial;
  exec.threads = args.threads;
  std::optional<std::filesystem::path> out;
  if (!args.out.empty()) out = args.out;
  const auto result = sbandit::run_experiment(config, exec, out);
  std::cout << sbandit::to_csv(result.aggregate.rows);
  if (result.aggregate.fit) print_fit(*result.aggregate.fit);

  if (args.assert_bands && config.slope_band) {
    const auto [lo, hi] = *config.slope_band;
    if (!result.aggregate.fit) {
      std::fprintf(stderr, "slope band set but no slope could be fitted\n");
      return kExitBand;
    }
    const double slope = result.aggregate.fit->slope;
    if (slope < lo || slope > hi) {
      std::fprintf(stderr, "slope %.6f outside [%.3f, %.3f]\n", slope, lo, hi);
      return kExitBand;
    }
  }
  return 0;
}

int cmd_fit(const std::string& csv_path) {
  std::ifstream in(csv_path);
  if (!in) throw sbandit::ConfigError("cannot read " + csv_path);
  std::stringstream buf;
  buf << in.rdbuf();
  std::vector<sbandit::AggregateRow> rows;
  try {
    rows = sbandit::rows_from_csv(buf.str());
  } catch (const std::invalid_argument& e) {
    throw sbandit::ConfigError(csv_path + ": " + e.what());
  }
  using Key = std::tuple<std::string, std::size_t, int, std::size_t, int>;
  std::map<Key, std::vector<std::pair<double, double>>> groups;
  for (const auto& r : rows)
    groups[{r.algorithm, r.num_arms, r.passes, r.memory, r.mode.value_or(-1)}].emplace_back(
        static_cast<double>(r.horizon), r.mean_regret);
  for (const auto& [key, points] : groups) {
    const auto& [alg, k, b, m, w] = key;
    std::printf("%s K=%zu B=%d M=%zu", alg.c_str(), k, b, m);
    if (w >= 0) std::printf(" w=%d", w);
    std::printf(": ");
    if (points.size() < 3) {
      std::printf("fewer than 3 horizons, no fit\n");
      continue;
    }
    print_fit(sbandit::fit_slope(points));
  }
  return 0;
}

struct GenArgs {
  std::size_t arms = 0;
  std::uint64_t horizon = 0;
  int passes = 1;
  int b = -1;
  std::uint64_t seed = 0;
  std::string out;
};

int cmd_gen_hard(const GenArgs& args) {
  sbandit::HardInstanceSpec spec;
  spec.num_arms = args.arms;
  spec.horizon = args.horizon;
  spec.passes = args.passes;
  spec.b = args.b < 0 ? args.passes : args.b;
  try {
    spec.validate();
  } catch (const std::invalid_argument& e) {
    throw sbandit::ConfigError(e.what());
  }
  const auto instance = sbandit::sample_hard_instance(spec, sbandit::Rng(args.seed));
  const std::string text = sbandit::instance_to_json(instance).dump(2) + "\n";
  if (args.out.empty() || args.out == "-") {
    std::cout << text;
  } else {
    std::ofstream out(args.out);
    out << text;
    if (!out) throw std::runtime_error("cannot write " + args.out);
  }
  return 0;
}

int cmd_certify(const std::string& path) {
  const sbandit::Json doc = read_json(path);
  sbandit::PsiTable psi = sbandit::PsiTable::uniform(1);
  try {
    psi = sbandit::psi_from_json(doc.at("psi"), doc.at("A").get<std::size_t>());
  } catch (const std::exception& e) {
    throw sbandit::ConfigError(path + ": " + e.what());
  }
  const auto cert = sbandit::certify_near_uniform(psi);
  sbandit::Json out;
  out["A"] = psi.arms();
  out["entropy_special"] = cert.entropy_special;
  out["entropy_bit"] = cert.entropy_bit;
  out["gamma"] = cert.gamma;
  std::cout << out.dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-pass limited-memory streaming bandit simulator"};
  app.require_subcommand(1);

  RunArgs run;
  auto* run_cmd = app.add_subcommand("run", "Run an experiment sweep and print the aggregate CSV");
  run_cmd->add_option("--config", run.config, "Experiment JSON")->required()->check(CLI::ExistingFile);
  run_cmd->add_option("--out", run.out, "Directory for records.jsonl and aggregate.csv");
  run_cmd->add_option("--seeds", run.seeds, "Override the seed count");
  run_cmd->add_option("--master-seed", run.master_seed, "Override the master seed");
  run_cmd->add_option("--threads", run.threads, "OpenMP threads (0 = default)");
  run_cmd->add_flag("--serial", run.serial, "Run seeds on the serial reference path");
  run_cmd->add_flag("--assert-bands", run.assert_bands, "Exit 3 if the fitted slope leaves the configured band");

  std::string fit_in;
  auto* fit_cmd = app.add_subcommand("fit", "Fit log-log slopes to an aggregate CSV");
  fit_cmd->add_option("--in", fit_in, "Aggregate CSV")->required();

  GenArgs gen;
  auto* gen_cmd = app.add_subcommand("gen-hard", "Sample one hard instance");
  gen_cmd->add_option("--K", gen.arms, "Number of arms")->required();
  gen_cmd->add_option("--T", gen.horizon, "Horizon")->required();
  gen_cmd->add_option("--B", gen.passes, "Passes")->required();
  gen_cmd->add_option("--b", gen.b, "Layers minus one (default B)");
  gen_cmd->add_option("--seed", gen.seed, "Seed");
  gen_cmd->add_option("--out", gen.out, "Output path, - for stdout");

  std::string psi_in;
  auto* cert_cmd = app.add_subcommand("certify-psi", "Entropies and minimal gamma of a psi table");
  cert_cmd->add_option("--in", psi_in, "JSON {\"A\": n, \"psi\": \"uniform\" | [[i, y, p], ...]}")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*run_cmd) return cmd_run(run);
    if (*fit_cmd) return cmd_fit(fit_in);
    if (*gen_cmd) return cmd_gen_hard(gen);
    if (*cert_cmd) return cmd_certify(psi_in);
  } catch (const sbandit::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
