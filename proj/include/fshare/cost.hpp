#pragma once

#include <Eigen/Dense>
#include <json.hpp>

#include <span>
#include <variant>
#include <vector>

namespace fshare {

/// h(x) = 0.5 x^T Q x + alpha^T x + gamma with Q symmetric positive
/// semidefinite and publicly known; alpha is the private affine coefficient.
/// gamma never enters optimization or communication.
struct QuadraticCost {
  Eigen::MatrixXd q;
  Eigen::VectorXd alpha;
  double gamma = 0.0;

  QuadraticCost(Eigen::MatrixXd q_in, Eigen::VectorXd alpha_in, double gamma_in = 0.0);
};

/// Univariate polynomial sum_l coeffs[l] * x^l, degree >= 1.
struct PolynomialCost {
  std::vector<double> coeffs;  // coeffs[l] multiplies x^l

  explicit PolynomialCost(std::vector<double> coeffs_in);
  int degree() const { return static_cast<int>(coeffs.size()) - 1; }
};

using Cost = std::variant<QuadraticCost, PolynomialCost>;

/// Axis-aligned box, the feasible set for the optimizer.
struct Box {
  Eigen::VectorXd lo;
  Eigen::VectorXd hi;

  Box(Eigen::VectorXd lo_in, Eigen::VectorXd hi_in);
  static Box uniform(int dim, double lo, double hi);
  int dimension() const { return static_cast<int>(lo.size()); }
  Eigen::VectorXd center() const { return 0.5 * (lo + hi); }
};

int dimension(const Cost& cost);
double evaluate(const Cost& cost, const Eigen::VectorXd& x);
Eigen::VectorXd gradient(const Cost& cost, const Eigen::VectorXd& x);

/// The private affine part: alpha for quadratics, the degree-1 coefficient
/// (as a 1-vector) for polynomials.
Eigen::VectorXd affine_coefficient(const Cost& cost);

/// Copy of the cost with its affine coefficient replaced.
Cost with_affine_coefficient(const Cost& cost, const Eigen::VectorXd& alpha);

/// m x n matrix whose column i is agent i's affine coefficient.
Eigen::MatrixXd affine_coefficients(std::span<const Cost> costs);

/// Componentwise clamp onto the box; idempotent and nonexpansive.
Eigen::VectorXd project(const Box& box, const Eigen::VectorXd& x);

/// Analytic minimizer of sum_i h_i over the box: solves the aggregate
/// normal equations (requires a positive definite aggregate quadratic, or a
/// polynomial sum that is effectively quadratic with positive curvature)
/// and clamps the solution. Serves as the oracle for convergence tests.
Eigen::VectorXd aggregate_minimizer(std::span<const Cost> costs, const Box& box);

Cost cost_from_json(const nlohmann::json& j);
nlohmann::json cost_to_json(const Cost& cost);
Box box_from_json(const nlohmann::json& j);
nlohmann::json box_to_json(const Box& box);

}  // namespace fshare
