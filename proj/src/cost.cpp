#include "fshare/cost.hpp"

#include "fshare/errors.hpp"
#include "fshare/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace fshare {

QuadraticCost::QuadraticCost(Eigen::MatrixXd q_in, Eigen::VectorXd alpha_in, double gamma_in)
    : q(std::move(q_in)), alpha(std::move(alpha_in)), gamma(gamma_in) {
  if (q.rows() != q.cols() || q.rows() != alpha.size()) {
    throw DomainError("quadratic cost: Q must be m x m with alpha of length m");
  }
  const double scale = std::max(1.0, q.cwiseAbs().maxCoeff());
  if ((q - q.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw DomainError("quadratic cost: Q must be symmetric");
  }
  const Eigen::VectorXd eigenvalues = eigendecompose(q).eigenvalues;
  if (eigenvalues[0] < -1e-9 * scale) {
    throw DomainError("quadratic cost: Q must be positive semidefinite");
  }
}

PolynomialCost::PolynomialCost(std::vector<double> coeffs_in) : coeffs(std::move(coeffs_in)) {
  if (coeffs.size() < 2) {
    throw DomainError("polynomial cost: degree must be at least 1");
  }
}

Box::Box(Eigen::VectorXd lo_in, Eigen::VectorXd hi_in)
    : lo(std::move(lo_in)), hi(std::move(hi_in)) {
  if (lo.size() != hi.size() || lo.size() == 0) {
    throw DomainError("box: lo and hi must be nonempty and of equal length");
  }
  for (int k = 0; k < lo.size(); ++k) {
    if (!(lo[k] <= hi[k])) throw DomainError("box: lo must not exceed hi");
  }
}

Box Box::uniform(int dim, double lo, double hi) {
  return Box(Eigen::VectorXd::Constant(dim, lo), Eigen::VectorXd::Constant(dim, hi));
}

int dimension(const Cost& cost) {
  return std::visit(
      [](const auto& c) -> int {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, QuadraticCost>) {
          return static_cast<int>(c.alpha.size());
        } else {
          return 1;
        }
      },
      cost);
}

namespace {

void require_dimension(const Cost& cost, const Eigen::VectorXd& x, const char* where) {
  if (x.size() != dimension(cost)) {
    throw DomainError(std::string(where) + ": point dimension does not match the cost");
  }
}

}  // namespace

double evaluate(const Cost& cost, const Eigen::VectorXd& x) {
  require_dimension(cost, x, "evaluate");
  return std::visit(
      [&](const auto& c) -> double {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, QuadraticCost>) {
          return 0.5 * x.dot(c.q * x) + c.alpha.dot(x) + c.gamma;
        } else {
          double value = 0.0;
          for (auto it = c.coeffs.rbegin(); it != c.coeffs.rend(); ++it) {
            value = value * x[0] + *it;
          }
          return value;
        }
      },
      cost);
}

Eigen::VectorXd gradient(const Cost& cost, const Eigen::VectorXd& x) {
  require_dimension(cost, x, "gradient");
  return std::visit(
      [&](const auto& c) -> Eigen::VectorXd {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, QuadraticCost>) {
          return c.q * x + c.alpha;
        } else {
          double value = 0.0;
          for (int l = c.degree(); l >= 1; --l) {
            value = value * x[0] + static_cast<double>(l) * c.coeffs[l];
          }
          return Eigen::VectorXd::Constant(1, value);
        }
      },
      cost);
}

Eigen::VectorXd affine_coefficient(const Cost& cost) {
  return std::visit(
      [](const auto& c) -> Eigen::VectorXd {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, QuadraticCost>) {
          return c.alpha;
        } else {
          return Eigen::VectorXd::Constant(1, c.coeffs[1]);
        }
      },
      cost);
}

Cost with_affine_coefficient(const Cost& cost, const Eigen::VectorXd& alpha) {
  Cost out = cost;
  std::visit(
      [&](auto& c) {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, QuadraticCost>) {
          if (alpha.size() != c.alpha.size()) {
            throw DomainError("with_affine_coefficient: dimension mismatch");
          }
          c.alpha = alpha;
        } else {
          if (alpha.size() != 1) {
            throw DomainError("with_affine_coefficient: polynomial costs are univariate");
          }
          c.coeffs[1] = alpha[0];
        }
      },
      out);
  return out;
}

Eigen::MatrixXd affine_coefficients(std::span<const Cost> costs) {
  if (costs.empty()) throw DomainError("affine_coefficients: empty cost list");
  const int m = dimension(costs[0]);
  Eigen::MatrixXd a(m, static_cast<int>(costs.size()));
  for (size_t i = 0; i < costs.size(); ++i) {
    if (dimension(costs[i]) != m) {
      throw DomainError("affine_coefficients: costs have mixed dimensions");
    }
    a.col(static_cast<int>(i)) = affine_coefficient(costs[i]);
  }
  return a;
}

Eigen::VectorXd project(const Box& box, const Eigen::VectorXd& x) {
  if (x.size() != box.lo.size()) throw DomainError("project: dimension mismatch");
  Eigen::VectorXd out(x.size());
  for (int k = 0; k < x.size(); ++k) {
    out[k] = std::min(std::max(x[k], box.lo[k]), box.hi[k]);
  }
  return out;
}

Eigen::VectorXd aggregate_minimizer(std::span<const Cost> costs, const Box& box) {
  if (costs.empty()) throw DomainError("aggregate_minimizer: empty cost list");
  const bool quadratic = std::holds_alternative<QuadraticCost>(costs[0]);
  for (const Cost& c : costs) {
    if (std::holds_alternative<QuadraticCost>(c) != quadratic) {
      throw DomainError("aggregate_minimizer: mixed cost kinds");
    }
  }
  if (quadratic) {
    const int m = dimension(costs[0]);
    if (box.dimension() != m) throw DomainError("aggregate_minimizer: box dimension mismatch");
    Eigen::MatrixXd q_sum = Eigen::MatrixXd::Zero(m, m);
    Eigen::VectorXd alpha_sum = Eigen::VectorXd::Zero(m);
    for (const Cost& c : costs) {
      const auto& qc = std::get<QuadraticCost>(c);
      if (qc.alpha.size() != m) throw DomainError("aggregate_minimizer: mixed dimensions");
      q_sum += qc.q;
      alpha_sum += qc.alpha;
    }
    const Eigen::VectorXd eigenvalues = eigendecompose(q_sum).eigenvalues;
    if (eigenvalues[0] <= 1e-12 * std::max(1.0, eigenvalues.cwiseAbs().maxCoeff())) {
      throw DomainError("aggregate_minimizer: aggregate quadratic is singular, non-unique minimizer");
    }
    return project(box, q_sum.ldlt().solve(-alpha_sum));
  }

  if (box.dimension() != 1) throw DomainError("aggregate_minimizer: box dimension mismatch");
  size_t max_len = 0;
  for (const Cost& c : costs) {
    max_len = std::max(max_len, std::get<PolynomialCost>(c).coeffs.size());
  }
  std::vector<double> sum(max_len, 0.0);
  double scale = 1.0;
  for (const Cost& c : costs) {
    const auto& coeffs = std::get<PolynomialCost>(c).coeffs;
    for (size_t l = 0; l < coeffs.size(); ++l) {
      sum[l] += coeffs[l];
      scale = std::max(scale, std::abs(coeffs[l]));
    }
  }
  for (size_t l = 3; l < sum.size(); ++l) {
    if (std::abs(sum[l]) > 1e-9 * scale) {
      throw DomainError(
          "aggregate_minimizer: polynomial sum has degree > 2, no analytic minimizer");
    }
  }
  const double a = sum.size() > 2 ? sum[2] : 0.0;
  if (a <= 1e-12 * scale) {
    throw DomainError("aggregate_minimizer: aggregate curvature is not positive, non-unique minimizer");
  }
  return project(box, Eigen::VectorXd::Constant(1, -sum[1] / (2.0 * a)));
}

Cost cost_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("kind")) {
    throw DomainError("cost: expected object with a \"kind\" field");
  }
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "quadratic") {
    Eigen::MatrixXd q = matrix_from_json(j.at("Q"));
    Eigen::VectorXd alpha = vector_from_json(j.at("alpha"));
    const double gamma = j.value("gamma", 0.0);
    return QuadraticCost(std::move(q), std::move(alpha), gamma);
  }
  if (kind == "polynomial") {
    std::vector<double> coeffs = j.at("coeffs").get<std::vector<double>>();
    return PolynomialCost(std::move(coeffs));
  }
  throw DomainError("cost: unknown kind \"" + kind + "\"");
}

nlohmann::json cost_to_json(const Cost& cost) {
  return std::visit(
      [](const auto& c) -> nlohmann::json {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, QuadraticCost>) {
          return {{"kind", "quadratic"},
                  {"Q", matrix_to_json(c.q)},
                  {"alpha", vector_to_json(c.alpha)},
                  {"gamma", c.gamma}};
        } else {
          return {{"kind", "polynomial"}, {"coeffs", c.coeffs}};
        }
      },
      cost);
}

Box box_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("lo") || !j.contains("hi")) {
    throw DomainError("box: expected object with \"lo\" and \"hi\"");
  }
  return Box(vector_from_json(j.at("lo")), vector_from_json(j.at("hi")));
}

nlohmann::json box_to_json(const Box& box) {
  return {{"lo", vector_to_json(box.lo)}, {"hi", vector_to_json(box.hi)}};
}

}  // namespace fshare
