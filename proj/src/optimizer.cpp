#include "fshare/optimizer.hpp"

#include "fshare/errors.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>

namespace fshare {

StepSchedule step_schedule_from_string(const std::string& name) {
  if (name == "inverse_sqrt") return StepSchedule::inverse_sqrt;
  if (name == "inverse_linear") return StepSchedule::inverse_linear;
  if (name == "constant") return StepSchedule::constant;
  throw DomainError("unknown step schedule \"" + name + "\"");
}

std::string to_string(StepSchedule schedule) {
  switch (schedule) {
    case StepSchedule::inverse_sqrt: return "inverse_sqrt";
    case StepSchedule::inverse_linear: return "inverse_linear";
    case StepSchedule::constant: return "constant";
  }
  throw DomainError("unknown step schedule");
}

double DgdConfig::step_size(int round) const {
  switch (schedule) {
    case StepSchedule::inverse_sqrt: return step0 / std::sqrt(round + 1.0);
    case StepSchedule::inverse_linear: return step0 / (round + 1.0);
    case StepSchedule::constant: return step0;
  }
  throw DomainError("unknown step schedule");
}

void DgdConfig::validate() const {
  if (max_rounds < 1) throw DomainError("dgd: max_rounds must be positive");
  if (!(step0 > 0.0)) throw DomainError("dgd: step0 must be positive");
  if (!(tolerance > 0.0)) throw DomainError("dgd: tolerance must be positive");
}

Eigen::VectorXd ExecutionTrace::final_mean() const {
  return final_estimates().rowwise().mean();
}

Eigen::MatrixXd consensus_weights(const Topology& topology) {
  if (!is_connected(topology)) {
    throw DomainError("consensus_weights: topology must be connected");
  }
  const int n = topology.agent_count();
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
  for (auto [i, j] : topology.edges()) {
    const double value = 1.0 / (1.0 + std::max(topology.degree(i), topology.degree(j)));
    w(i - 1, j - 1) = value;
    w(j - 1, i - 1) = value;
  }
  for (int i = 0; i < n; ++i) {
    w(i, i) = 1.0 - w.row(i).sum();
  }
  return w;
}

namespace {

double max_pairwise_distance(const Eigen::MatrixXd& estimates) {
  double worst = 0.0;
  for (int i = 0; i < estimates.cols(); ++i) {
    for (int j = i + 1; j < estimates.cols(); ++j) {
      worst = std::max(worst, (estimates.col(i) - estimates.col(j)).norm());
    }
  }
  return worst;
}

double max_oracle_distance(const Eigen::MatrixXd& estimates, const Eigen::VectorXd& oracle) {
  double worst = 0.0;
  for (int i = 0; i < estimates.cols(); ++i) {
    worst = std::max(worst, (estimates.col(i) - oracle).norm());
  }
  return worst;
}

}  // namespace

ExecutionTrace dgd_run(std::span<const Cost> costs, const Topology& topology,
                       const DgdConfig& config,
                       const std::optional<Eigen::VectorXd>& oracle) {
  config.validate();
  const int n = topology.agent_count();
  if (costs.size() != static_cast<size_t>(n)) {
    throw DomainError("dgd_run: one cost per agent required");
  }
  const int m = dimension(costs[0]);
  for (const Cost& c : costs) {
    if (dimension(c) != m) throw DomainError("dgd_run: costs have mixed dimensions");
  }
  if (config.box.dimension() != m) {
    throw DomainError("dgd_run: box dimension does not match the costs");
  }
  const Eigen::MatrixXd weights = consensus_weights(topology);

  Eigen::MatrixXd x(m, n);
  if (config.init) {
    if (config.init->rows() != m || config.init->cols() != n) {
      throw DomainError("dgd_run: init must be m x n");
    }
    for (int i = 0; i < n; ++i) x.col(i) = project(config.box, config.init->col(i));
  } else {
    x.colwise() = config.box.center();
  }

  ExecutionTrace trace;
  trace.estimates.reserve(config.max_rounds + 1);
  auto record = [&](const Eigen::MatrixXd& est) {
    trace.estimates.push_back(est);
    trace.disagreement.push_back(max_pairwise_distance(est));
    if (oracle) trace.oracle_error.push_back(max_oracle_distance(est, *oracle));
  };
  record(x);

  Eigen::MatrixXd stepped(m, n);
  int quiet_rounds = 0;
  for (int round = 0; round < config.max_rounds; ++round) {
    const double eta = config.step_size(round);
    for (int i = 0; i < n; ++i) {
      stepped.col(i) =
          project(config.box, x.col(i) - eta * gradient(costs[i], x.col(i)));
    }
    // Mixing a set of in-box columns stays in the box (convexity).
    Eigen::MatrixXd next = stepped * weights.transpose();
    if (!next.allFinite()) {
      throw NumericError("dgd_run: non-finite iterate at round " + std::to_string(round + 1));
    }
    const double max_step = (next - x).colwise().norm().maxCoeff();
    x = std::move(next);
    record(x);
    quiet_rounds = max_step < config.tolerance * eta ? quiet_rounds + 1 : 0;
    if (quiet_rounds >= 10) {
      trace.stopped_early = true;
      break;
    }
  }
  return trace;
}

double disagreement(const ExecutionTrace& trace, int round) {
  if (round < 0 || round >= static_cast<int>(trace.disagreement.size())) {
    throw DomainError("disagreement: round " + std::to_string(round) + " not recorded");
  }
  return trace.disagreement[round];
}

namespace {

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void write_trace_csv(const ExecutionTrace& trace, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw DomainError("cannot open " + path.string() + " for writing");
  out << "round,agent,coordinate,value\n";
  for (size_t round = 0; round < trace.estimates.size(); ++round) {
    const Eigen::MatrixXd& est = trace.estimates[round];
    for (int agent = 0; agent < est.cols(); ++agent) {
      for (int k = 0; k < est.rows(); ++k) {
        out << round << ',' << agent + 1 << ',' << k + 1 << ','
            << format_double(est(k, agent)) << '\n';
      }
    }
  }
}

void write_convergence_csv(const ExecutionTrace& trace, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw DomainError("cannot open " + path.string() + " for writing");
  out << "round,disagreement,error_to_oracle\n";
  for (size_t round = 0; round < trace.estimates.size(); ++round) {
    out << round << ',' << format_double(trace.disagreement[round]) << ',';
    if (!trace.oracle_error.empty()) out << format_double(trace.oracle_error[round]);
    out << '\n';
  }
}

}  // namespace fshare
