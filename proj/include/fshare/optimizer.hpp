#pragma once

#include "fshare/cost.hpp"
#include "fshare/topology.hpp"

#include <filesystem>
#include <optional>

namespace fshare {

enum class StepSchedule { inverse_sqrt, inverse_linear, constant };
enum class WeightScheme { metropolis };

StepSchedule step_schedule_from_string(const std::string& name);
std::string to_string(StepSchedule schedule);

struct DgdConfig {
  int max_rounds = 1000;
  double step0 = 1.0;
  StepSchedule schedule = StepSchedule::inverse_sqrt;
  WeightScheme weights = WeightScheme::metropolis;
  double tolerance = 1e-9;
  Box box = Box::uniform(1, -100.0, 100.0);
  std::optional<Eigen::MatrixXd> init;  // m x n; absent means box center

  double step_size(int round) const;
  void validate() const;
};

/// Full history of one synchronous-round run. Round 0 holds the initial
/// estimates; every recorded estimate lies in the box.
struct ExecutionTrace {
  std::vector<Eigen::MatrixXd> estimates;  // per round, m x n
  std::vector<double> disagreement;        // max pairwise distance per round
  std::vector<double> oracle_error;        // max agent distance to oracle, empty if none
  bool stopped_early = false;

  int rounds() const { return static_cast<int>(estimates.size()) - 1; }
  const Eigen::MatrixXd& final_estimates() const { return estimates.back(); }
  Eigen::VectorXd final_mean() const;
};

/// Metropolis mixing matrix: w_ij = 1 / (1 + max(deg_i, deg_j)) on edges,
/// diagonal absorbs the remainder. Doubly stochastic and nonnegative;
/// requires a connected topology.
Eigen::MatrixXd consensus_weights(const Topology& topology);

/// Synchronous-round distributed gradient descent on the given local costs:
/// each round every agent takes a projected gradient step on its own cost
/// and then averages the stepped values with its neighbors' under the
/// Metropolis weights. Stops early once max_i ||x_i(k+1) - x_i(k)|| stays
/// below tolerance * eta_k for 10 consecutive rounds. Throws NumericError,
/// naming the round, if an iterate becomes non-finite.
ExecutionTrace dgd_run(std::span<const Cost> costs, const Topology& topology,
                       const DgdConfig& config,
                       const std::optional<Eigen::VectorXd>& oracle = std::nullopt);

/// Max pairwise estimate distance at a recorded round.
double disagreement(const ExecutionTrace& trace, int round);

/// CSV with header round,agent,coordinate,value.
void write_trace_csv(const ExecutionTrace& trace, const std::filesystem::path& path);

/// CSV with header round,disagreement,error_to_oracle (last column empty
/// when the run had no oracle).
void write_convergence_csv(const ExecutionTrace& trace, const std::filesystem::path& path);

}  // namespace fshare
