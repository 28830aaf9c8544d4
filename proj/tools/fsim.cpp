// fsim: simulate the zero-sum cost obfuscation protocol with distributed
// gradient descent, and audit the statistical privacy it provides.
//
// Exit codes: 0 success, 2 configuration or validation error, 3 numeric
// failure (divergence, failed selftest, unbounded divergence).

#include "fshare/errors.hpp"
#include "fshare/harness.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

namespace {

struct CommonArgs {
  std::string config_path;
  std::string out_dir = "out";
  std::optional<std::uint64_t> seed_override;
  std::optional<long> trials_override;
  std::optional<int> t_override;
};

fshare::ExperimentConfig load_effective_config(const CommonArgs& args) {
  fshare::ExperimentConfig config = fshare::load_config(args.config_path);
  if (args.seed_override) config.seed = *args.seed_override;
  if (args.trials_override) config.trials = *args.trials_override;
  if (args.t_override) config.t = *args.t_override;
  return config;
}

void add_common(CLI::App* cmd, CommonArgs& args, bool needs_config = true) {
  auto* opt = cmd->add_option("--config", args.config_path, "experiment config JSON");
  if (needs_config) opt->required();
  cmd->add_option("--out", args.out_dir, "output directory");
  cmd->add_option("--seed", args.seed_override, "master seed override");
  cmd->add_option("--trials", args.trials_override, "trial count override");
  cmd->add_option("--t", args.t_override, "max corrupted set size for the report");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"simulator and privacy auditor for masked distributed optimization"};
  app.require_subcommand(1);

  CommonArgs args;
  std::string fault_name = "none";
  CLI::App* optimize = app.add_subcommand("optimize", "run masked and unmasked descent");
  add_common(optimize, args);
  CLI::App* audit =
      app.add_subcommand("privacy-audit", "Monte Carlo divergence estimate for a scenario pair");
  add_common(audit, args);
  CLI::App* graph = app.add_subcommand("graph-report", "connectivity and worst-case bound table");
  add_common(graph, args);
  CLI::App* selftest = app.add_subcommand("selftest", "run the protocol invariant suite");
  selftest->add_option("--seed", args.seed_override, "master seed override");
  selftest->add_option("--trials", args.trials_override, "trial count override");
  selftest->add_option("--inject-fault", fault_name,
                       "testing hook: none | mask-zero-sum")
      ->check(CLI::IsMember({"none", "mask-zero-sum"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (selftest->parsed()) {
      const std::uint64_t seed = args.seed_override.value_or(20240801ULL);
      const long trials = args.trials_override.value_or(20000L);
      const auto fault = fault_name == "mask-zero-sum" ? fshare::SelftestFault::mask_zero_sum
                                                       : fshare::SelftestFault::none;
      const fshare::SelftestResult result =
          fshare::run_selftest(seed, trials, fault, std::cout);
      std::cout << result.checks_run - result.checks_failed << "/" << result.checks_run
                << " checks passed\n";
      return result.passed() ? 0 : 3;
    }

    const fshare::ExperimentConfig config = load_effective_config(args);
    const std::uint64_t seed = fshare::resolve_seed(config);
    const std::filesystem::path outdir(args.out_dir);

    if (optimize->parsed()) {
      const fshare::OptimizeSummary summary = fshare::run_optimize(config, outdir, seed);
      std::cout << "unmasked final error " << summary.unmasked_final_error << " ("
                << summary.unmasked_rounds << " rounds)\n"
                << "masked final error   " << summary.masked_final_error << " ("
                << summary.masked_rounds << " rounds)\n"
                << "outputs in " << outdir.string() << "\n";
    } else if (audit->parsed()) {
      const fshare::PrivacyReport report = fshare::run_privacy_audit(config, outdir, seed);
      std::cout << fshare::report_to_json(report).dump(2) << "\n"
                << "outputs in " << outdir.string() << "\n";
    } else if (graph->parsed()) {
      std::cout << fshare::run_graph_report(config, outdir).dump(2) << "\n";
    }
    return 0;
  } catch (const fshare::DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const fshare::NumericError& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
