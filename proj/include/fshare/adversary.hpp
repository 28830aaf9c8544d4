#pragma once

#include "fshare/cost.hpp"
#include "fshare/obfuscation.hpp"
#include "fshare/topology.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace fshare {

/// A corrupted agent set and its honest complement. At least one agent must
/// stay honest; the empty corrupted set is allowed.
struct CorruptedSet {
  std::vector<int> corrupted;  // ascending
  std::vector<int> honest;     // ascending

  static CorruptedSet make(const Topology& topology, std::vector<int> corrupted);
};

/// Everything the corrupted agents observe in one execution, assuming the
/// worst case in which all effective costs are revealed during phase II:
/// their own private and effective costs, every noise vector on an edge
/// incident to a corrupted agent, and the honest agents' effective affine
/// coefficients.
struct AdversaryView {
  std::vector<int> corrupted;
  std::vector<Cost> corrupted_private;
  std::vector<Cost> corrupted_effective;
  std::map<std::pair<int, int>, Eigen::VectorXd> incident_noise;  // R_C
  std::map<int, Eigen::VectorXd> honest_effective_alpha;
};

/// Honest effective coefficients with every adversary-known noise term
/// removed: alpha_bar_i = alpha_i + sum over honest-honest neighbors of
/// (r_ij - r_ji). This is the sufficient statistic for the view divergence.
struct ReducedView {
  std::map<int, Eigen::VectorXd> alpha_bar;
};

/// A pair of coefficient matrices to be distinguished by the adversary,
/// subject to the constraints that corrupted columns agree and honest
/// columns share their sum.
struct ScenarioPair {
  Eigen::MatrixXd a;  // m x n
  Eigen::MatrixXd b;  // m x n
  CorruptedSet corrupted;
};

struct PrivacyReport {
  std::optional<double> epsilon_theory;  // absent: no guarantee (vertex cut)
  double mu2_honest = 0.0;
  double kl_empirical = 0.0;  // +inf on support mismatch
  std::optional<double> kl_bound;
  double kl_standard_error = 0.0;
  long trials = 0;
  int dimension = 1;
  std::vector<int> honest;
  Eigen::VectorXd mean_a;    // coordinate-major stacking of honest fits
  Eigen::VectorXd mean_b;
  Eigen::MatrixXd cov_a;     // block-diagonal by coordinate
  Eigen::MatrixXd cov_b;
  Eigen::MatrixXd cov_pooled;
  std::vector<std::string> flags;
};

AdversaryView extract_view(const Topology& topology, const PhaseOneRecord& record,
                           const CorruptedSet& corrupted);

ReducedView reduce_view(const AdversaryView& view, const Topology& topology,
                        const CorruptedSet& corrupted);

/// Theorem-level epsilon for a fixed corrupted set: 1 / (4 sigma^2 mu2) on
/// the honest subgraph, no value when the corrupted set is a vertex cut.
/// A single remaining honest agent yields 0 (the scenario constraints pin
/// its coefficient, so nothing can be distinguished).
std::optional<double> theoretical_epsilon(const Topology& topology,
                                          const CorruptedSet& corrupted, double sigma);

/// Worst-case epsilon over every corrupted set of size <= t, by exhaustive
/// enumeration (n <= 20). No value when the graph lacks (t+1)-vertex
/// connectivity.
std::optional<double> corollary_epsilon(const Topology& topology, int t, double sigma);

/// Sampled variant for graphs too large to enumerate: maximizes over
/// `samples` random corrupted sets, so the result is only a lower bound on
/// the worst case (cut sets encountered still disable the guarantee).
std::optional<double> corollary_epsilon_sampled(const Topology& topology, int t,
                                                double sigma, int samples,
                                                std::uint64_t seed);

/// Worst epsilon over corrupted sets of exactly `size`; no value when some
/// set of that size is a vertex cut.
std::optional<double> worst_epsilon_of_size(const Topology& topology, int size,
                                            double sigma);

/// Same bound for degree-ell coefficient masking (the value does not depend
/// on the degree); ell is validated.
std::optional<double> degree_privacy_epsilon(const Topology& topology,
                                             const CorruptedSet& corrupted, double sigma,
                                             int ell);

/// Checks the two scenario constraints; returns a description of the first
/// violation, or nothing when the pair is admissible.
std::optional<std::string> validate_scenario(const ScenarioPair& scenario);

/// Stream family behind one audit branch (0 = A, 1 = B); trial t draws its
/// noise from fork(t). Exposed so tooling can regenerate the exact samples
/// an audit consumed.
RngStream audit_branch_stream(std::uint64_t master_seed, int branch);

/// Monte Carlo estimate of the divergence between the two scenarios' views:
/// runs `trials` independent phase-I executions per branch, fits Gaussian
/// moments to the reduced views, and evaluates the Gaussian divergence
/// coordinate by coordinate. Requires trials >= 10000.
PrivacyReport empirical_kl(const ScenarioPair& scenario, const Topology& topology,
                           double sigma, long trials, std::uint64_t master_seed);

nlohmann::json report_to_json(const PrivacyReport& report);

}  // namespace fshare
