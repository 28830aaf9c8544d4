#pragma once

#include "fshare/adversary.hpp"
#include "fshare/cost.hpp"
#include "fshare/optimizer.hpp"
#include "fshare/topology.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace fshare {

inline constexpr const char* kVersion = "0.1.0";

/// Alternative coefficients for the privacy audit's second branch: either a
/// full set of affine coefficients (one vector per agent), or one scalar
/// per agent at a single polynomial degree.
struct ScenarioB {
  std::optional<int> degree;  // absent: affine coefficients
  Eigen::MatrixXd coeffs;     // m x n (1 x n for a degree scenario)
};

struct ExperimentConfig {
  Topology topology = Topology(1, {});
  std::vector<Cost> costs;
  double sigma = 1.0;
  std::vector<int> corrupted;
  std::optional<ScenarioB> scenario_b;
  DgdConfig dgd;
  long trials = 100000;
  int t = 1;
  std::optional<std::uint64_t> seed;
  bool emit_histograms = false;
  bool dump_trace = false;
};

/// Parses and validates a config document; error messages carry the JSON
/// location (parse errors) or the offending field.
ExperimentConfig config_from_json(const nlohmann::json& j);
ExperimentConfig load_config(const std::filesystem::path& path);
nlohmann::json config_to_json(const ExperimentConfig& config);

/// Seed actually used for a run: the config's, unless absent, in which case
/// one is generated and recorded in the manifest.
std::uint64_t resolve_seed(const ExperimentConfig& config);

/// FNV-1a hash of the canonical (sorted-key, compact) config serialization.
std::string config_hash(const ExperimentConfig& config);

struct RunManifest {
  std::string config_hash;
  std::uint64_t seed = 0;
  std::string version = kVersion;
  std::vector<std::string> outputs;  // file names relative to the output dir
};

void write_manifest(const RunManifest& manifest, const std::filesystem::path& outdir);

struct OptimizeSummary {
  Eigen::VectorXd oracle;
  double unmasked_final_error = 0.0;
  double masked_final_error = 0.0;
  int unmasked_rounds = 0;
  int masked_rounds = 0;
  bool unmasked_stopped_early = false;
  bool masked_stopped_early = false;
};

/// Phase I + phase II plus an unmasked baseline run; writes estimate and
/// convergence CSVs for both runs, a summary JSON, and the manifest.
OptimizeSummary run_optimize(const ExperimentConfig& config,
                             const std::filesystem::path& outdir,
                             std::uint64_t seed);

/// Monte Carlo privacy audit of the configured scenario pair; writes the
/// report JSON, per-branch fitted moments CSV, optional per-agent histogram
/// CSVs, and the manifest.
PrivacyReport run_privacy_audit(const ExperimentConfig& config,
                                const std::filesystem::path& outdir,
                                std::uint64_t seed);

/// Connectivity and worst-case epsilon report for the configured topology;
/// written as graph_report.json and returned.
nlohmann::json run_graph_report(const ExperimentConfig& config,
                                const std::filesystem::path& outdir);

enum class SelftestFault { none, mask_zero_sum };

struct SelftestResult {
  int checks_run = 0;
  int checks_failed = 0;
  bool passed() const { return checks_failed == 0; }
};

/// Runs the protocol invariants at a reduced trial count, printing one line
/// per check. The fault injection hook corrupts a mask so the zero-sum
/// check must fail (negative control for the selftest itself).
SelftestResult run_selftest(std::uint64_t seed, long trials, SelftestFault fault,
                            std::ostream& log);

}  // namespace fshare
