#include "fshare/rng.hpp"

#include <cmath>
#include <numbers>

namespace fshare {

double NormalSampler::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  // u1 in (0, 1] so the log is finite.
  const double u1 = 1.0 - uniform();
  const double u2 = uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_ = radius * std::sin(angle);
  has_spare_ = true;
  return radius * std::cos(angle);
}

Eigen::VectorXd NormalSampler::normal_vector(int dim, double stddev) {
  Eigen::VectorXd v(dim);
  for (int k = 0; k < dim; ++k) v[k] = stddev * normal();
  return v;
}

}  // namespace fshare
