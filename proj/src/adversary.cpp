#include "fshare/adversary.hpp"

#include "fshare/errors.hpp"
#include "fshare/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

namespace fshare {

RngStream audit_branch_stream(std::uint64_t master_seed, int branch) {
  if (branch != 0 && branch != 1) {
    throw DomainError("audit_branch_stream: branch must be 0 or 1");
  }
  return RngStream{master_seed}.fork(branch + 1);
}

CorruptedSet CorruptedSet::make(const Topology& topology, std::vector<int> corrupted) {
  const int n = topology.agent_count();
  std::sort(corrupted.begin(), corrupted.end());
  corrupted.erase(std::unique(corrupted.begin(), corrupted.end()), corrupted.end());
  for (int v : corrupted) {
    if (v < 1 || v > n) {
      throw DomainError("corrupted set: agent id " + std::to_string(v) + " outside 1.." +
                        std::to_string(n));
    }
  }
  if (static_cast<int>(corrupted.size()) >= n) {
    throw DomainError("corrupted set: at least one agent must stay honest");
  }
  CorruptedSet out;
  out.honest.reserve(n - corrupted.size());
  auto it = corrupted.begin();
  for (int v = 1; v <= n; ++v) {
    if (it != corrupted.end() && *it == v) {
      ++it;
    } else {
      out.honest.push_back(v);
    }
  }
  out.corrupted = std::move(corrupted);
  return out;
}

AdversaryView extract_view(const Topology& topology, const PhaseOneRecord& record,
                           const CorruptedSet& corrupted) {
  if (corrupted.corrupted.empty()) {
    throw DomainError("extract_view: the adversary corrupts at least one agent");
  }
  if (record.costs.size() != static_cast<size_t>(topology.agent_count()) ||
      record.effective.size() != record.costs.size()) {
    throw DomainError("extract_view: record does not match the topology");
  }
  std::set<int> bad(corrupted.corrupted.begin(), corrupted.corrupted.end());
  AdversaryView view;
  view.corrupted = corrupted.corrupted;
  for (int i : corrupted.corrupted) {
    view.corrupted_private.push_back(record.costs[i - 1]);
    view.corrupted_effective.push_back(record.effective[i - 1]);
  }
  for (const auto& [key, value] : record.noise.r) {
    if (bad.count(key.first) || bad.count(key.second)) {
      view.incident_noise.emplace(key, value);
    }
  }
  for (int i : corrupted.honest) {
    view.honest_effective_alpha.emplace(i, affine_coefficient(record.effective[i - 1]));
  }
  return view;
}

ReducedView reduce_view(const AdversaryView& view, const Topology& topology,
                        const CorruptedSet& corrupted) {
  std::set<int> bad(corrupted.corrupted.begin(), corrupted.corrupted.end());
  ReducedView reduced;
  for (const auto& [i, alpha_tilde] : view.honest_effective_alpha) {
    Eigen::VectorXd bar = alpha_tilde;
    for (int j : topology.neighbors(i)) {
      if (!bad.count(j)) continue;
      auto sent = view.incident_noise.find({i, j});
      auto received = view.incident_noise.find({j, i});
      if (sent == view.incident_noise.end() || received == view.incident_noise.end()) {
        throw DomainError("reduce_view: noise missing for edge {" + std::to_string(i) +
                          ", " + std::to_string(j) + "}");
      }
      bar -= sent->second - received->second;
    }
    reduced.alpha_bar.emplace(i, std::move(bar));
  }
  return reduced;
}

std::optional<double> theoretical_epsilon(const Topology& topology,
                                          const CorruptedSet& corrupted, double sigma) {
  if (!(sigma > 0.0)) throw DomainError("theoretical_epsilon: sigma must be positive");
  if (is_vertex_cut(topology, corrupted.corrupted)) return std::nullopt;
  if (corrupted.honest.size() == 1) return 0.0;
  const Eigen::MatrixXd l_honest =
      laplacian(induced_subgraph(topology, corrupted.honest).topology);
  return 1.0 / (4.0 * sigma * sigma * algebraic_connectivity(l_honest));
}

namespace {

std::optional<double> worst_epsilon_over(const Topology& topology, double sigma,
                                         const std::vector<std::vector<int>>& sets) {
  double worst = 0.0;
  for (const auto& c : sets) {
    auto eps = theoretical_epsilon(topology, CorruptedSet::make(topology, c), sigma);
    if (!eps) return std::nullopt;
    worst = std::max(worst, *eps);
  }
  return worst;
}

void enumerate_subsets(int n, int max_size, std::vector<std::vector<int>>& out) {
  out.push_back({});
  std::vector<int> current;
  auto recurse = [&](auto&& self, int next) -> void {
    if (static_cast<int>(current.size()) == max_size) return;
    for (int v = next; v <= n; ++v) {
      current.push_back(v);
      out.push_back(current);
      self(self, v + 1);
      current.pop_back();
    }
  };
  if (max_size > 0) recurse(recurse, 1);
}

}  // namespace

std::optional<double> corollary_epsilon(const Topology& topology, int t, double sigma) {
  if (t < 0) throw DomainError("corollary_epsilon: t must be nonnegative");
  const int n = topology.agent_count();
  if (n < 2) throw DomainError("corollary_epsilon: needs at least 2 agents");
  if (n > 20) {
    throw DomainError(
        "corollary_epsilon: n > 20 is too large for exhaustive enumeration; "
        "use corollary_epsilon_sampled for a labeled lower bound");
  }
  if (t > n - 1) t = n - 1;
  if (vertex_connectivity(topology) < t + 1) return std::nullopt;
  std::vector<std::vector<int>> sets;
  enumerate_subsets(n, std::min(t, n - 1), sets);
  return worst_epsilon_over(topology, sigma, sets);
}

std::optional<double> corollary_epsilon_sampled(const Topology& topology, int t,
                                                double sigma, int samples,
                                                std::uint64_t seed) {
  if (t < 0) throw DomainError("corollary_epsilon_sampled: t must be nonnegative");
  const int n = topology.agent_count();
  if (t > n - 1) t = n - 1;
  NormalSampler rng(mix64(seed, 0x5a17));
  std::vector<std::vector<int>> sets;
  sets.push_back({});
  for (int s = 0; s < samples && t > 0; ++s) {
    const int size = 1 + static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(t));
    std::set<int> pick;
    while (static_cast<int>(pick.size()) < size) {
      pick.insert(1 + static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(n)));
    }
    sets.emplace_back(pick.begin(), pick.end());
  }
  return worst_epsilon_over(topology, sigma, sets);
}

std::optional<double> worst_epsilon_of_size(const Topology& topology, int size,
                                            double sigma) {
  const int n = topology.agent_count();
  if (size < 0 || size > n - 1) {
    throw DomainError("worst_epsilon_of_size: size must lie in 0..n-1");
  }
  if (n > 20) throw DomainError("worst_epsilon_of_size: capped at n <= 20");
  std::vector<std::vector<int>> all;
  enumerate_subsets(n, size, all);
  std::vector<std::vector<int>> sets;
  for (auto& s : all) {
    if (static_cast<int>(s.size()) == size) sets.push_back(std::move(s));
  }
  return worst_epsilon_over(topology, sigma, sets);
}

std::optional<double> degree_privacy_epsilon(const Topology& topology,
                                             const CorruptedSet& corrupted, double sigma,
                                             int ell) {
  if (ell < 1) throw DomainError("degree_privacy_epsilon: degree index must be >= 1");
  return theoretical_epsilon(topology, corrupted, sigma);
}

std::optional<std::string> validate_scenario(const ScenarioPair& scenario) {
  constexpr double kTol = 1e-12;
  if (scenario.a.rows() != scenario.b.rows() || scenario.a.cols() != scenario.b.cols()) {
    return "coefficient matrices differ in shape";
  }
  for (int i : scenario.corrupted.corrupted) {
    if ((scenario.a.col(i - 1) - scenario.b.col(i - 1)).cwiseAbs().maxCoeff() > kTol) {
      return "corrupted coefficient mismatch at agent " + std::to_string(i);
    }
  }
  Eigen::VectorXd sum_a = Eigen::VectorXd::Zero(scenario.a.rows());
  Eigen::VectorXd sum_b = Eigen::VectorXd::Zero(scenario.a.rows());
  for (int i : scenario.corrupted.honest) {
    sum_a += scenario.a.col(i - 1);
    sum_b += scenario.b.col(i - 1);
  }
  if ((sum_a - sum_b).cwiseAbs().maxCoeff() > kTol) {
    return "honest sum mismatch";
  }
  return std::nullopt;
}

namespace {

// Honest-honest directed edges with their global stream indices; reduced
// view samples depend on no other randomness.
struct HonestEdge {
  int from_pos;  // position of the smaller endpoint in the honest list
  int to_pos;
  int forward_stream;
  int backward_stream;
};

std::vector<HonestEdge> honest_edges(const Topology& topology, const CorruptedSet& c) {
  std::vector<int> position(topology.agent_count() + 1, -1);
  for (size_t p = 0; p < c.honest.size(); ++p) position[c.honest[p]] = static_cast<int>(p);
  std::vector<HonestEdge> out;
  for (auto [i, j] : topology.edges()) {
    if (position[i] < 0 || position[j] < 0) continue;
    out.push_back(HonestEdge{position[i], position[j],
                             directed_edge_substream(topology, i, j),
                             directed_edge_substream(topology, j, i)});
  }
  return out;
}

struct MomentAccumulator {
  Eigen::VectorXd sum;
  Eigen::MatrixXd outer_sum;

  explicit MomentAccumulator(int dim)
      : sum(Eigen::VectorXd::Zero(dim)), outer_sum(Eigen::MatrixXd::Zero(dim, dim)) {}

  void add(const Eigen::VectorXd& x) {
    sum += x;
    outer_sum.selfadjointView<Eigen::Lower>().rankUpdate(x);
  }
  Eigen::VectorXd mean(long n) const { return sum / static_cast<double>(n); }
  Eigen::MatrixXd covariance(long n) const {
    const Eigen::VectorXd mu = mean(n);
    Eigen::MatrixXd full = outer_sum.selfadjointView<Eigen::Lower>();
    full -= static_cast<double>(n) * mu * mu.transpose();
    full /= static_cast<double>(n - 1);
    return 0.5 * (full + full.transpose());
  }
};

// First-order delta-method spread of the plug-in Gaussian divergence
// estimator, with a finite-sample floor so the A = B case keeps a usable
// scale: sqrt((4 kl + 2 kl^2 + r(r+3)/2) / trials).
double kl_standard_error(double kl, int rank, long trials) {
  const double r = rank;
  return std::sqrt((4.0 * kl + 2.0 * kl * kl + 0.5 * r * (r + 3.0)) /
                   static_cast<double>(trials));
}

}  // namespace

PrivacyReport empirical_kl(const ScenarioPair& scenario, const Topology& topology,
                           double sigma, long trials, std::uint64_t master_seed) {
  if (!(sigma > 0.0)) throw DomainError("empirical_kl: sigma must be positive");
  if (trials < 10000) throw DomainError("empirical_kl: at least 10000 trials required");
  if (scenario.a.cols() != topology.agent_count()) {
    throw DomainError("empirical_kl: coefficient matrix must have one column per agent");
  }
  if (auto violation = validate_scenario(scenario)) {
    throw DomainError("empirical_kl: scenario constraint violated: " + *violation);
  }
  const CorruptedSet& c = scenario.corrupted;
  const int m = static_cast<int>(scenario.a.rows());
  const int h = static_cast<int>(c.honest.size());
  const std::vector<HonestEdge> edges = honest_edges(topology, c);

  PrivacyReport report;
  report.trials = trials;
  report.dimension = m;
  report.honest = c.honest;
  report.epsilon_theory = theoretical_epsilon(topology, c, sigma);
  if (report.epsilon_theory) {
    report.kl_bound = *report.epsilon_theory * (scenario.a - scenario.b).squaredNorm();
  } else {
    report.flags.push_back("corrupted set is a vertex cut: no privacy guarantee");
  }
  if (h >= 2) {
    report.mu2_honest =
        algebraic_connectivity(laplacian(induced_subgraph(topology, c.honest).topology));
  }

  // One coordinate-k fit per branch; coordinates are independent, so the
  // stacked covariance is block-diagonal.
  std::vector<std::vector<MomentAccumulator>> acc(
      2, std::vector<MomentAccumulator>(m, MomentAccumulator(h)));
  Eigen::MatrixXd honest_alpha[2];
  honest_alpha[0].resize(m, h);
  honest_alpha[1].resize(m, h);
  for (int p = 0; p < h; ++p) {
    honest_alpha[0].col(p) = scenario.a.col(c.honest[p] - 1);
    honest_alpha[1].col(p) = scenario.b.col(c.honest[p] - 1);
  }

  Eigen::MatrixXd sample(m, h);
  for (int branch = 0; branch < 2; ++branch) {
    const RngStream branch_stream = audit_branch_stream(master_seed, branch);
    for (long trial = 0; trial < trials; ++trial) {
      const RngStream trial_stream = branch_stream.fork(static_cast<std::uint64_t>(trial));
      sample = honest_alpha[branch];
      for (const HonestEdge& e : edges) {
        NormalSampler forward = trial_stream.sampler(e.forward_stream);
        NormalSampler backward = trial_stream.sampler(e.backward_stream);
        const Eigen::VectorXd delta =
            forward.normal_vector(m, sigma) - backward.normal_vector(m, sigma);
        sample.col(e.from_pos) += delta;
        sample.col(e.to_pos) -= delta;
      }
      for (int k = 0; k < m; ++k) {
        acc[branch][k].add(sample.row(k).transpose());
      }
    }
  }

  report.mean_a.resize(m * h);
  report.mean_b.resize(m * h);
  report.cov_a = Eigen::MatrixXd::Zero(m * h, m * h);
  report.cov_b = Eigen::MatrixXd::Zero(m * h, m * h);
  double kl_total = 0.0;
  double variance_total = 0.0;
  bool support_mismatch = false;
  for (int k = 0; k < m; ++k) {
    const Eigen::VectorXd mean_a = acc[0][k].mean(trials);
    const Eigen::VectorXd mean_b = acc[1][k].mean(trials);
    const Eigen::MatrixXd cov_a = acc[0][k].covariance(trials);
    const Eigen::MatrixXd cov_b = acc[1][k].covariance(trials);
    report.mean_a.segment(k * h, h) = mean_a;
    report.mean_b.segment(k * h, h) = mean_b;
    report.cov_a.block(k * h, k * h, h, h) = cov_a;
    report.cov_b.block(k * h, k * h, h, h) = cov_b;
    const int rank = h > 1 ? h - 1 : 0;
    try {
      const double kl = gaussian_kl(mean_a, cov_a, mean_b, cov_b);
      kl_total += kl;
      const double se = kl_standard_error(kl, rank, trials);
      variance_total += se * se;
    } catch (const SupportMismatchError&) {
      support_mismatch = true;
    }
  }
  if (support_mismatch) {
    report.kl_empirical = std::numeric_limits<double>::infinity();
    report.kl_standard_error = 0.0;
    report.flags.push_back("support mismatch: empirical divergence unbounded");
  } else {
    report.kl_empirical = kl_total;
    report.kl_standard_error = std::sqrt(variance_total);
  }
  report.cov_pooled = 0.5 * (report.cov_a + report.cov_b);
  return report;
}

nlohmann::json report_to_json(const PrivacyReport& report) {
  nlohmann::json j;
  if (report.epsilon_theory) {
    j["epsilon_theory"] = *report.epsilon_theory;
  } else {
    j["epsilon_theory"] = "no guarantee";
  }
  j["mu2_honest"] = report.mu2_honest;
  if (std::isfinite(report.kl_empirical)) {
    j["kl_empirical"] = report.kl_empirical;
  } else {
    j["kl_empirical"] = "infinite";
  }
  if (report.kl_bound) {
    j["kl_bound"] = *report.kl_bound;
  } else {
    j["kl_bound"] = "no guarantee";
  }
  j["kl_standard_error"] = report.kl_standard_error;
  j["trials"] = report.trials;
  j["mean_A"] = vector_to_json(report.mean_a);
  j["mean_B"] = vector_to_json(report.mean_b);
  j["cov"] = matrix_to_json(report.cov_pooled);
  j["flags"] = report.flags;
  return j;
}

}  // namespace fshare
