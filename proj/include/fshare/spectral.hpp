#pragma once

#include "fshare/rng.hpp"
#include "fshare/topology.hpp"

#include <Eigen/Dense>

#include <span>
#include <utility>

namespace fshare {

/// Relative threshold below which an eigenvalue counts as zero when forming
/// generalized inverses, pseudo-determinants and support projectors.
inline constexpr double kRankCutoff = 1e-10;

struct EigenDecomposition {
  Eigen::VectorXd eigenvalues;   // ascending
  Eigen::MatrixXd eigenvectors;  // orthonormal columns, matching order
};

/// Graph Laplacian L = D - A. Integer-valued, equals incidence * incidence^T
/// exactly.
Eigen::MatrixXd laplacian(const Topology& topology);

/// Oriented incidence matrix: the column for edge (i, j), i < j, has +1 at
/// row i and -1 at row j. Satisfies 1^T O = 0 and O O^T = laplacian.
Eigen::MatrixXd incidence(const Topology& topology,
                          std::span<const std::pair<int, int>> order);
Eigen::MatrixXd incidence(const Topology& topology);

/// Dense symmetric eigendecomposition, eigenvalues ascending. Rejects
/// non-symmetric input.
EigenDecomposition eigendecompose(const Eigen::MatrixXd& m);

/// Second-smallest Laplacian eigenvalue (positive iff the graph is
/// connected).
double algebraic_connectivity(const Eigen::MatrixXd& laplacian_matrix);

/// Generalized inverse of a connected graph's Laplacian: zero eigenvalue
/// stays zero, nonzero eigenvalues are inverted. Rejects matrices with more
/// than one zero eigenvalue.
Eigen::MatrixXd generalized_inverse(const Eigen::MatrixXd& laplacian_matrix);

/// (2 pi scale)^(n-1) times the product of the n-1 nonzero eigenvalues of
/// the Laplacian.
double pseudo_determinant(const Eigen::MatrixXd& laplacian_matrix, double scale);

/// Zero-mean Gaussian with covariance scale * L, supported on the hyperplane
/// orthogonal to the all-ones vector. This is the exact law of the mask
/// vector produced by the pairwise noise exchange.
class DegenerateGaussian {
 public:
  DegenerateGaussian(Eigen::MatrixXd laplacian_matrix, double scale);

  /// Density with respect to Lebesgue measure on the support hyperplane;
  /// zero off the hyperplane.
  double density(const Eigen::VectorXd& r) const;

  int dimension() const { return static_cast<int>(laplacian_.rows()); }
  double scale() const { return scale_; }

 private:
  Eigen::MatrixXd laplacian_;
  double scale_;
  Eigen::MatrixXd pinv_;
  double pseudo_det_;
};

/// Draws one N(0, 2 sigma^2) variate per edge and maps it through the
/// incidence matrix. The result sums to zero up to rounding.
Eigen::VectorXd sample_mask_vector(const Topology& topology, double sigma,
                                   NormalSampler& rng);

/// KL divergence between two Gaussians whose covariances may be rank
/// deficient, using pseudo-inverse and pseudo-determinant on the shared
/// support. Throws SupportMismatchError when the supports differ (including
/// a mean difference outside the support), in which case the divergence is
/// infinite.
double gaussian_kl(const Eigen::VectorXd& mean_a, const Eigen::MatrixXd& cov_a,
                   const Eigen::VectorXd& mean_b, const Eigen::MatrixXd& cov_b);

nlohmann::json matrix_to_json(const Eigen::MatrixXd& m);
nlohmann::json vector_to_json(const Eigen::VectorXd& v);
Eigen::MatrixXd matrix_from_json(const nlohmann::json& j);
Eigen::VectorXd vector_from_json(const nlohmann::json& j);

}  // namespace fshare
