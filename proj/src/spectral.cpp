#include "fshare/spectral.hpp"

#include "fshare/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace fshare {

namespace {

void require_symmetric(const Eigen::MatrixXd& m, const char* where) {
  if (m.rows() != m.cols()) {
    throw DomainError(std::string(where) + ": matrix is not square");
  }
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw DomainError(std::string(where) + ": matrix is not symmetric");
  }
}

double zero_cutoff(const Eigen::VectorXd& eigenvalues) {
  const double mu_max = eigenvalues.cwiseAbs().maxCoeff();
  return kRankCutoff * std::max(mu_max, 1e-300);
}

}  // namespace

Eigen::MatrixXd laplacian(const Topology& topology) {
  const int n = topology.agent_count();
  Eigen::MatrixXd l = Eigen::MatrixXd::Zero(n, n);
  for (auto [i, j] : topology.edges()) {
    l(i - 1, i - 1) += 1.0;
    l(j - 1, j - 1) += 1.0;
    l(i - 1, j - 1) -= 1.0;
    l(j - 1, i - 1) -= 1.0;
  }
  return l;
}

Eigen::MatrixXd incidence(const Topology& topology,
                          std::span<const std::pair<int, int>> order) {
  const int n = topology.agent_count();
  if (order.size() != topology.edges().size()) {
    throw DomainError("incidence: edge order does not match the topology");
  }
  Eigen::MatrixXd theta = Eigen::MatrixXd::Zero(n, static_cast<int>(order.size()));
  std::vector<char> used(order.size(), 0);
  for (int col = 0; col < static_cast<int>(order.size()); ++col) {
    auto [i, j] = order[col];
    int idx = topology.edge_index(i, j);
    if (idx < 0 || used[idx] || i >= j) {
      throw DomainError("incidence: edge order does not match the topology");
    }
    used[idx] = 1;
    theta(i - 1, col) = 1.0;
    theta(j - 1, col) = -1.0;
  }
  return theta;
}

Eigen::MatrixXd incidence(const Topology& topology) {
  return incidence(topology, std::span(topology.edges()));
}

EigenDecomposition eigendecompose(const Eigen::MatrixXd& m) {
  require_symmetric(m, "eigendecompose");
  // Closed-form path for the smallest sizes; it is exact on integer-valued
  // 2x2 Laplacians where the iterative solver leaves 1-ulp residue.
  if (m.rows() == 2) {
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> solver;
    solver.computeDirect(Eigen::Matrix2d(m));
    return EigenDecomposition{solver.eigenvalues(), solver.eigenvectors()};
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m);
  if (solver.info() != Eigen::Success) {
    throw NumericError("eigendecompose: solver failed to converge");
  }
  return EigenDecomposition{solver.eigenvalues(), solver.eigenvectors()};
}

double algebraic_connectivity(const Eigen::MatrixXd& laplacian_matrix) {
  if (laplacian_matrix.rows() < 2) {
    throw DomainError("algebraic_connectivity: needs dimension >= 2");
  }
  return eigendecompose(laplacian_matrix).eigenvalues[1];
}

namespace {

// Shared eigenvalue screening for the Laplacian-based operations: exactly
// one eigenvalue may sit below the rank cutoff.
EigenDecomposition decompose_connected_laplacian(const Eigen::MatrixXd& l,
                                                 const char* where) {
  EigenDecomposition eig = eigendecompose(l);
  const double cutoff = zero_cutoff(eig.eigenvalues);
  int zeros = 0;
  for (int i = 0; i < eig.eigenvalues.size(); ++i) {
    if (std::abs(eig.eigenvalues[i]) <= cutoff) ++zeros;
  }
  if (zeros > 1) {
    throw DomainError(std::string(where) +
                      ": Laplacian has more than one zero eigenvalue (graph disconnected)");
  }
  return eig;
}

}  // namespace

Eigen::MatrixXd generalized_inverse(const Eigen::MatrixXd& laplacian_matrix) {
  EigenDecomposition eig =
      decompose_connected_laplacian(laplacian_matrix, "generalized_inverse");
  const double cutoff = zero_cutoff(eig.eigenvalues);
  Eigen::VectorXd inv = Eigen::VectorXd::Zero(eig.eigenvalues.size());
  for (int i = 0; i < eig.eigenvalues.size(); ++i) {
    if (std::abs(eig.eigenvalues[i]) > cutoff) inv[i] = 1.0 / eig.eigenvalues[i];
  }
  return eig.eigenvectors * inv.asDiagonal() * eig.eigenvectors.transpose();
}

double pseudo_determinant(const Eigen::MatrixXd& laplacian_matrix, double scale) {
  if (!(scale > 0.0)) throw DomainError("pseudo_determinant: scale must be positive");
  EigenDecomposition eig =
      decompose_connected_laplacian(laplacian_matrix, "pseudo_determinant");
  const double cutoff = zero_cutoff(eig.eigenvalues);
  double det = 1.0;
  for (int i = 0; i < eig.eigenvalues.size(); ++i) {
    if (std::abs(eig.eigenvalues[i]) > cutoff) {
      det *= 2.0 * std::numbers::pi * scale * eig.eigenvalues[i];
    }
  }
  return det;
}

DegenerateGaussian::DegenerateGaussian(Eigen::MatrixXd laplacian_matrix, double scale)
    : laplacian_(std::move(laplacian_matrix)), scale_(scale) {
  if (!(scale_ > 0.0)) throw DomainError("DegenerateGaussian: scale must be positive");
  pinv_ = generalized_inverse(laplacian_);
  pseudo_det_ = pseudo_determinant(laplacian_, scale_);
}

double DegenerateGaussian::density(const Eigen::VectorXd& r) const {
  if (r.size() != laplacian_.rows()) {
    throw DomainError("DegenerateGaussian::density: dimension mismatch");
  }
  const double sum = r.sum();
  if (sum != 0.0 && std::abs(sum) > 1e-9 * r.norm()) return 0.0;
  const double quad = r.dot(pinv_ * r);
  return std::exp(-quad / (2.0 * scale_)) / std::sqrt(pseudo_det_);
}

Eigen::VectorXd sample_mask_vector(const Topology& topology, double sigma,
                                   NormalSampler& rng) {
  if (!(sigma > 0.0)) throw DomainError("sample_mask_vector: sigma must be positive");
  const int n = topology.agent_count();
  Eigen::VectorXd mask = Eigen::VectorXd::Zero(n);
  const double stddev = sigma * std::numbers::sqrt2;
  for (auto [i, j] : topology.edges()) {
    const double c = stddev * rng.normal();
    mask[i - 1] += c;
    mask[j - 1] -= c;
  }
  return mask;
}

namespace {

struct SupportDecomposition {
  Eigen::MatrixXd basis;       // columns spanning the support
  Eigen::VectorXd eigenvalues; // matching positive eigenvalues
};

SupportDecomposition support_of(const Eigen::MatrixXd& cov, const char* side) {
  EigenDecomposition eig = eigendecompose(cov);
  const double cutoff = zero_cutoff(eig.eigenvalues);
  std::vector<int> kept;
  for (int i = 0; i < eig.eigenvalues.size(); ++i) {
    const double mu = eig.eigenvalues[i];
    if (mu < -cutoff) {
      throw DomainError(std::string("gaussian_kl: covariance ") + side +
                        " is not positive semidefinite");
    }
    if (mu > cutoff) kept.push_back(i);
  }
  SupportDecomposition out;
  out.basis.resize(cov.rows(), kept.size());
  out.eigenvalues.resize(kept.size());
  for (size_t k = 0; k < kept.size(); ++k) {
    out.basis.col(k) = eig.eigenvectors.col(kept[k]);
    out.eigenvalues[k] = eig.eigenvalues[kept[k]];
  }
  return out;
}

}  // namespace

double gaussian_kl(const Eigen::VectorXd& mean_a, const Eigen::MatrixXd& cov_a,
                   const Eigen::VectorXd& mean_b, const Eigen::MatrixXd& cov_b) {
  if (mean_a.size() != mean_b.size() || cov_a.rows() != mean_a.size() ||
      cov_b.rows() != mean_b.size()) {
    throw DomainError("gaussian_kl: dimension mismatch");
  }
  SupportDecomposition sup_a = support_of(cov_a, "A");
  SupportDecomposition sup_b = support_of(cov_b, "B");
  const auto rank = sup_b.eigenvalues.size();
  if (sup_a.eigenvalues.size() != rank) {
    throw SupportMismatchError("gaussian_kl: supports differ in rank; divergence is infinite");
  }
  const Eigen::MatrixXd proj_a = sup_a.basis * sup_a.basis.transpose();
  const Eigen::MatrixXd proj_b = sup_b.basis * sup_b.basis.transpose();
  if ((proj_a - proj_b).norm() > 1e-6 * std::sqrt(std::max<double>(1, rank))) {
    throw SupportMismatchError("gaussian_kl: supports differ; divergence is infinite");
  }
  const Eigen::VectorXd delta = mean_a - mean_b;
  const Eigen::VectorXd off_support = delta - proj_b * delta;
  if (off_support.norm() > std::max(1e-8 * delta.norm(), 1e-12)) {
    throw SupportMismatchError(
        "gaussian_kl: mean difference leaves the shared support; divergence is infinite");
  }

  // Work in branch B's support basis, where both covariances are full rank.
  const Eigen::MatrixXd a_in_b =
      sup_b.basis.transpose() * cov_a * sup_b.basis;             // rank x rank
  const Eigen::VectorXd pinv_b = sup_b.eigenvalues.cwiseInverse();
  const Eigen::VectorXd delta_b = sup_b.basis.transpose() * delta;

  double trace_term = 0.0;
  for (int i = 0; i < rank; ++i) trace_term += pinv_b[i] * a_in_b(i, i);
  double quad_term = 0.0;
  for (int i = 0; i < rank; ++i) quad_term += pinv_b[i] * delta_b[i] * delta_b[i];
  double logdet_term = 0.0;
  for (int i = 0; i < rank; ++i) {
    logdet_term += std::log(sup_b.eigenvalues[i]) - std::log(sup_a.eigenvalues[i]);
  }
  const double kl =
      0.5 * (trace_term - static_cast<double>(rank) + quad_term + logdet_term);
  return std::max(0.0, kl);
}

nlohmann::json matrix_to_json(const Eigen::MatrixXd& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (int i = 0; i < m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

nlohmann::json vector_to_json(const Eigen::VectorXd& v) {
  nlohmann::json out = nlohmann::json::array();
  for (int i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

Eigen::MatrixXd matrix_from_json(const nlohmann::json& j) {
  if (!j.is_array() || j.empty()) throw DomainError("matrix: expected a nonempty array of rows");
  const int rows = static_cast<int>(j.size());
  const int cols = static_cast<int>(j.at(0).size());
  Eigen::MatrixXd m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    const auto& row = j.at(i);
    if (static_cast<int>(row.size()) != cols) {
      throw DomainError("matrix: ragged rows");
    }
    for (int c = 0; c < cols; ++c) m(i, c) = row.at(c).get<double>();
  }
  return m;
}

Eigen::VectorXd vector_from_json(const nlohmann::json& j) {
  if (!j.is_array()) throw DomainError("vector: expected an array");
  Eigen::VectorXd v(j.size());
  for (int i = 0; i < static_cast<int>(j.size()); ++i) v[i] = j.at(i).get<double>();
  return v;
}

}  // namespace fshare
