#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fshare/cost.hpp"
#include "fshare/errors.hpp"
#include "fshare/rng.hpp"

#include <cmath>

using namespace fshare;

namespace {

Cost scalar_quadratic(double q, double alpha, double gamma = 0.0) {
  return QuadraticCost(Eigen::MatrixXd::Constant(1, 1, q),
                       Eigen::VectorXd::Constant(1, alpha), gamma);
}

Eigen::VectorXd scalar(double x) { return Eigen::VectorXd::Constant(1, x); }

// x^2 + x, x^2 + 2x, x^2 + 3x
std::vector<Cost> golden_costs() {
  return {scalar_quadratic(2.0, 1.0), scalar_quadratic(2.0, 2.0), scalar_quadratic(2.0, 3.0)};
}

}  // namespace

TEST_CASE("construction validates") {
  CHECK_THROWS_AS(QuadraticCost(Eigen::MatrixXd::Constant(1, 1, -1.0), scalar(0.0)),
                  DomainError);
  Eigen::MatrixXd asym(2, 2);
  asym << 1, 2, 0, 1;
  CHECK_THROWS_AS(QuadraticCost(asym, Eigen::VectorXd::Zero(2)), DomainError);
  CHECK_THROWS_AS(QuadraticCost(Eigen::MatrixXd::Identity(2, 2), scalar(0.0)), DomainError);
  CHECK_THROWS_AS(PolynomialCost({1.0}), DomainError);
  CHECK_THROWS_AS(Box(scalar(1.0), scalar(-1.0)), DomainError);
  CHECK_THROWS_AS(Box(Eigen::VectorXd(), Eigen::VectorXd()), DomainError);
}

TEST_CASE("evaluation") {
  CHECK(evaluate(scalar_quadratic(2.0, 1.0), scalar(1.0)) == 2.0);   // x^2 + x at 1
  CHECK(evaluate(scalar_quadratic(2.0, 3.0), scalar(-1.0)) == -2.0); // x^2 + 3x at -1
  CHECK(evaluate(scalar_quadratic(0.0, 0.0), scalar(17.0)) == 0.0);
  CHECK(evaluate(Cost(PolynomialCost({0.0, 1.0, 1.0})), scalar(1.0)) == 2.0);
  CHECK_THROWS_AS(evaluate(golden_costs()[0], Eigen::VectorXd::Zero(2)), DomainError);
}

TEST_CASE("gradient") {
  CHECK(gradient(scalar_quadratic(2.0, 1.0), scalar(0.0)) == scalar(1.0));
  CHECK(gradient(scalar_quadratic(0.0, 4.0), scalar(123.0)) == scalar(4.0));
  CHECK(gradient(Cost(PolynomialCost({5.0, 1.0, 1.0})), scalar(0.0)) == scalar(1.0));
  CHECK(gradient(Cost(PolynomialCost({0.0, 0.0, 0.0, 1.0})), scalar(2.0)) == scalar(12.0));
}

TEST_CASE("gradient matches central finite differences") {
  NormalSampler rng(31);
  const double step = 1e-5;
  for (int trial = 0; trial < 100; ++trial) {
    const int m = 1 + static_cast<int>(rng.next_u64() % 4);
    Eigen::MatrixXd root(m, m);
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < m; ++j) root(i, j) = rng.normal();
    }
    const Cost cost = QuadraticCost(root * root.transpose(), rng.normal_vector(m, 2.0),
                                    rng.normal());
    const Eigen::VectorXd x = rng.normal_vector(m, 3.0);
    const Eigen::VectorXd g = gradient(cost, x);
    for (int k = 0; k < m; ++k) {
      Eigen::VectorXd lo = x, hi = x;
      lo[k] -= step;
      hi[k] += step;
      const double fd = (evaluate(cost, hi) - evaluate(cost, lo)) / (2.0 * step);
      CHECK(g[k] == doctest::Approx(fd).epsilon(1e-6));
    }
  }
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> coeffs(2 + rng.next_u64() % 3);
    for (double& c : coeffs) c = rng.normal();
    const Cost cost = PolynomialCost(coeffs);
    const Eigen::VectorXd x = scalar(rng.normal() * 2.0);
    const double fd =
        (evaluate(cost, scalar(x[0] + step)) - evaluate(cost, scalar(x[0] - step))) /
        (2.0 * step);
    CHECK(gradient(cost, x)[0] == doctest::Approx(fd).epsilon(1e-6));
  }
}

TEST_CASE("projection") {
  const Box box = Box::uniform(1, -100.0, 100.0);
  CHECK(project(box, scalar(150.0)) == scalar(100.0));
  CHECK(project(box, scalar(3.0)) == scalar(3.0));
  CHECK(project(box, project(box, scalar(150.0))) == scalar(100.0));

  NormalSampler rng(17);
  const Box b2(rng.normal_vector(3, 1.0).cwiseAbs() * -1.0, rng.normal_vector(3, 1.0).cwiseAbs());
  for (int trial = 0; trial < 200; ++trial) {
    const Eigen::VectorXd x = rng.normal_vector(3, 4.0);
    const Eigen::VectorXd y = rng.normal_vector(3, 4.0);
    CHECK((project(b2, x) - project(b2, y)).norm() <= (x - y).norm() + 1e-12);
  }
}

TEST_CASE("aggregate minimizer") {
  const Box box = Box::uniform(1, -100.0, 100.0);
  const auto costs = golden_costs();
  // Aggregate 3x^2 + 6x has its minimum at -1.
  CHECK(aggregate_minimizer(costs, box) == scalar(-1.0));

  CHECK(aggregate_minimizer(std::vector<Cost>{scalar_quadratic(1.0, 0.0)}, box) ==
        scalar(0.0));

  // Minimizer at 150 clamps to the box edge.
  CHECK(aggregate_minimizer(std::vector<Cost>{scalar_quadratic(1.0, -150.0)}, box) ==
        scalar(100.0));

  CHECK_THROWS_AS(aggregate_minimizer(std::vector<Cost>{scalar_quadratic(0.0, 1.0)}, box),
                  DomainError);

  // Polynomial route: sum (x^2 + x) + (x^2 - 3x) = 2x^2 - 2x, minimum at 0.5.
  std::vector<Cost> polys{PolynomialCost({0.0, 1.0, 1.0}), PolynomialCost({0.0, -3.0, 1.0})};
  CHECK(aggregate_minimizer(polys, box) == scalar(0.5));

  // Cubic terms must cancel in the sum for the analytic oracle to apply.
  std::vector<Cost> cubics{PolynomialCost({0.0, 1.0, 1.0, 1.0}),
                           PolynomialCost({0.0, 1.0, 1.0, -1.0})};
  CHECK(aggregate_minimizer(cubics, box) == scalar(-0.5));
  std::vector<Cost> bad{PolynomialCost({0.0, 1.0, 1.0, 1.0}),
                        PolynomialCost({0.0, 1.0, 1.0, 1.0})};
  CHECK_THROWS_AS(aggregate_minimizer(bad, box), DomainError);
}

TEST_CASE("aggregate minimizer satisfies first-order optimality") {
  NormalSampler rng(53);
  // Interior minimizers in several dimensions.
  for (int trial = 0; trial < 40; ++trial) {
    const int m = 1 + static_cast<int>(rng.next_u64() % 3);
    std::vector<Cost> costs;
    for (int i = 0; i < 3; ++i) {
      Eigen::MatrixXd root(m, m);
      for (int r = 0; r < m; ++r) {
        for (int c = 0; c < m; ++c) root(r, c) = rng.normal();
      }
      costs.emplace_back(QuadraticCost(root * root.transpose() +
                                           0.1 * Eigen::MatrixXd::Identity(m, m),
                                       rng.normal_vector(m, 3.0)));
    }
    const Box box = Box::uniform(m, -1000.0, 1000.0);
    const Eigen::VectorXd z = aggregate_minimizer(costs, box);
    Eigen::VectorXd total_gradient = Eigen::VectorXd::Zero(m);
    for (const Cost& c : costs) total_gradient += gradient(c, z);
    for (int probe = 0; probe < 20; ++probe) {
      const Eigen::VectorXd x = project(box, rng.normal_vector(m, 2.0));
      CHECK(total_gradient.dot(x - z) >= -1e-6);
    }
  }
  // Univariate with active clamping, where the projected solution is the
  // constrained minimizer.
  for (int trial = 0; trial < 40; ++trial) {
    std::vector<Cost> costs;
    for (int i = 0; i < 3; ++i) {
      costs.emplace_back(QuadraticCost(Eigen::MatrixXd::Constant(1, 1, 0.5 + rng.uniform()),
                                       scalar(rng.normal() * 4.0)));
    }
    const Box box = Box::uniform(1, -1.0, 1.0);
    const Eigen::VectorXd z = aggregate_minimizer(costs, box);
    double total_gradient = 0.0;
    for (const Cost& c : costs) total_gradient += gradient(c, z)[0];
    for (int probe = 0; probe < 20; ++probe) {
      const double x = project(box, scalar(rng.normal() * 2.0))[0];
      CHECK(total_gradient * (x - z[0]) >= -1e-6);
    }
  }
}

TEST_CASE("affine coefficients") {
  const auto costs = golden_costs();
  const Eigen::MatrixXd a = affine_coefficients(costs);
  CHECK(a.rows() == 1);
  CHECK(a.cols() == 3);
  CHECK(a(0, 0) == 1.0);
  CHECK(a(0, 1) == 2.0);
  CHECK(a(0, 2) == 3.0);

  std::vector<Cost> zeros{scalar_quadratic(1.0, 0.0), scalar_quadratic(1.0, 0.0)};
  CHECK(affine_coefficients(zeros) == Eigen::MatrixXd::Zero(1, 2));

  std::vector<Cost> one{scalar_quadratic(1.0, 5.0)};
  CHECK(affine_coefficients(one) == Eigen::MatrixXd::Constant(1, 1, 5.0));

  std::vector<Cost> mixed{scalar_quadratic(1.0, 0.0),
                          QuadraticCost(Eigen::MatrixXd::Identity(2, 2), Eigen::VectorXd::Zero(2))};
  CHECK_THROWS_AS(affine_coefficients(mixed), DomainError);
}

TEST_CASE("gamma does not influence gradients or minimizers") {
  const Box box = Box::uniform(1, -10.0, 10.0);
  const Cost with_gamma = scalar_quadratic(2.0, 1.0, 42.0);
  const Cost without = scalar_quadratic(2.0, 1.0, 0.0);
  CHECK(gradient(with_gamma, scalar(0.3)) == gradient(without, scalar(0.3)));
  CHECK(aggregate_minimizer(std::vector<Cost>{with_gamma}, box) ==
        aggregate_minimizer(std::vector<Cost>{without}, box));
}

TEST_CASE("cost json round trip") {
  const Cost q = scalar_quadratic(2.0, 1.0, 0.5);
  const Cost q2 = cost_from_json(cost_to_json(q));
  CHECK(std::get<QuadraticCost>(q2).alpha == scalar(1.0));
  CHECK(std::get<QuadraticCost>(q2).gamma == 0.5);

  const Cost p = PolynomialCost({1.0, 2.0, 3.0});
  const Cost p2 = cost_from_json(cost_to_json(p));
  CHECK(std::get<PolynomialCost>(p2).coeffs == std::vector<double>{1.0, 2.0, 3.0});

  CHECK_THROWS_AS(cost_from_json({{"kind", "mystery"}}), DomainError);
  CHECK_THROWS_AS(cost_from_json(nlohmann::json::array()), DomainError);
}
