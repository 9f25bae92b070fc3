// pcapp: contrastive subspace recovery benchmarks.
//
//   pcapp theory --regime fixed|growing --lambda <l> --c <c>
//   pcapp simulate --preset <name> [--trials N] [--seed S] [--norm operator|frobenius]
//                  --out records.csv [--summary summary.csv]
//   pcapp simulate --config <file> ...
//   pcapp list-presets
//
// Exit codes: 0 success, 1 invalid arguments or config, 2 runtime failure.

#include "CLI11.hpp"

#include "pcapp/errors.hpp"
#include "pcapp/harness.hpp"
#include "pcapp/theory.hpp"

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

namespace {

constexpr int kOk = 0;
constexpr int kBadArgs = 1;
constexpr int kRuntime = 2;

struct TheoryArgs {
  std::string regime = "fixed";
  std::optional<double> lambda;
  double c = 0.0;
};

struct SimulateArgs {
  std::string preset;
  std::string config;
  std::optional<int> trials;
  std::optional<long long> seed;
  std::string norm;
  std::string out;
  std::string summary;
  std::vector<int> sample_sizes;
  std::vector<double> ratios;
  int threads = 0;
  bool no_timing = false;
  bool quiet = false;
};

int run_theory(const TheoryArgs& args) {
  using namespace pcapp;
  double dist = 0.0;
  if (args.regime == "fixed") {
    if (!args.lambda) {
      std::cerr << "theory: --lambda is required for the fixed regime\n";
      return kBadArgs;
    }
    const theory::Prediction p = theory::fixed_aspect_error(*args.lambda, args.c);
    if (p.below_threshold) {
      std::cerr << "note: lambda is below the detectability threshold sqrt(c)\n";
    }
    dist = p.dist;
  } else {
    // With --lambda, c is the aspect ratio d/n and the effective ratio is
    // c / lambda; without it, c is taken as the effective ratio directly.
    const double c_eff = args.lambda ? args.c / *args.lambda : args.c;
    if (args.lambda && !(*args.lambda > 0.0)) throw InvalidInput("--lambda must be positive");
    dist = theory::growing_spike_error(c_eff);
  }
  std::printf("%.5f\n", dist);
  return kOk;
}

int run_simulate(const SimulateArgs& args) {
  using namespace pcapp;
  harness::ExperimentConfig config = args.config.empty() ? harness::preset(args.preset)
                                                          : harness::load_config(args.config);
  if (args.trials) config.trials = *args.trials;
  if (args.seed) config.base_seed = static_cast<std::uint64_t>(*args.seed);
  if (!args.norm.empty()) config.norm = parse_subspace_norm(args.norm);
  if (!args.sample_sizes.empty()) config.sample_sizes = args.sample_sizes;
  if (!args.ratios.empty()) config.aspect_ratios = args.ratios;
  if (args.no_timing) config.record_timing = false;
  config.validate();

  const harness::SweepResult result = harness::run_sweep(config, args.threads);
  harness::emit_csv(result.records, args.out);
  if (!args.summary.empty()) harness::emit_summary(result.summaries, args.summary);
  if (!args.quiet) {
    for (const auto& row : result.summaries) {
      std::printf("%-40s %-22s %6.3g  %s%s\n", row.preset.c_str(), row.method.c_str(),
                  row.aspect_ratio, harness::format_cell(row).c_str(),
                  row.failed ? (" failed=" + std::to_string(row.failed)).c_str() : "");
    }
  }
  return kOk;
}

int run_list() {
  for (const auto& info : pcapp::harness::list_presets()) {
    std::printf("%-34s %s\n", info.name.c_str(), info.description.c_str());
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Contrastive subspace recovery: PCA, PCA+, PCA++ and baselines"};
  app.require_subcommand(1);

  TheoryArgs theory_args;
  auto* theory_cmd = app.add_subcommand("theory", "Print the predicted PCA++ subspace error");
  theory_cmd->add_option("--regime", theory_args.regime, "fixed or growing")
      ->check(CLI::IsMember({"fixed", "growing"}));
  theory_cmd->add_option("--lambda", theory_args.lambda, "weakest signal spike");
  theory_cmd->add_option("--c", theory_args.c, "aspect ratio d/n")->required();

  SimulateArgs sim;
  auto* sim_cmd = app.add_subcommand("simulate", "Run a seeded Monte-Carlo sweep");
  auto* preset_opt = sim_cmd->add_option("--preset", sim.preset, "compiled-in experiment");
  auto* config_opt = sim_cmd->add_option("--config", sim.config, "key = value config file");
  preset_opt->excludes(config_opt);
  sim_cmd->add_option("--trials", sim.trials, "trials per sweep point")
      ->check(CLI::PositiveNumber);
  sim_cmd->add_option("--seed", sim.seed, "base seed; trial t uses base + t");
  sim_cmd->add_option("--norm", sim.norm, "operator or frobenius")
      ->check(CLI::IsMember({"operator", "frobenius"}));
  sim_cmd->add_option("--out", sim.out, "per-trial records CSV")->required();
  sim_cmd->add_option("--summary", sim.summary, "summary CSV");
  sim_cmd->add_option("--n", sim.sample_sizes, "override sample sizes")->delimiter(',');
  sim_cmd->add_option("--ratios", sim.ratios, "override aspect ratios")->delimiter(',');
  sim_cmd->add_option("--threads", sim.threads, "worker threads (0 = all cores)")
      ->check(CLI::NonNegativeNumber);
  sim_cmd->add_flag("--no-timing", sim.no_timing, "write elapsed_seconds as 0");
  sim_cmd->add_flag("--quiet", sim.quiet, "do not print the summary table");

  auto* list_cmd = app.add_subcommand("list-presets", "List the compiled-in experiments");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kBadArgs;
  }

  try {
    if (theory_cmd->parsed()) return run_theory(theory_args);
    if (sim_cmd->parsed()) {
      if (sim.preset.empty() && sim.config.empty()) {
        std::cerr << "simulate: one of --preset or --config is required\n";
        return kBadArgs;
      }
      return run_simulate(sim);
    }
    if (list_cmd->parsed()) return run_list();
  } catch (const pcapp::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kBadArgs;
  } catch (const pcapp::InvalidInput& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kBadArgs;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRuntime;
  }
  return kBadArgs;
}
