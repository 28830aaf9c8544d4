#pragma once

#include <Eigen/Dense>
#include <cstdint>

namespace fshare {

// All randomness in the toolkit flows from one 64-bit master seed through
// the SplitMix64 generator below. The algorithm is pinned here (not taken
// from <random>) so that traces are bit-reproducible across compilers and
// standard libraries.

/// One SplitMix64 output step applied to `h ^ v`. Used both as the stream
/// advance function and to derive child seeds from (seed, index) pairs.
inline std::uint64_t mix64(std::uint64_t h, std::uint64_t v = 0) {
  std::uint64_t z = (h ^ v) + 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// SplitMix64 uniform generator with a Box-Muller transform on top.
/// normal() consumes two uniforms per pair of variates; the second variate
/// is cached, so a sampler seeded identically always yields the same
/// sequence regardless of how draws are grouped into vectors.
class NormalSampler {
 public:
  explicit NormalSampler(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    state_ += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform double in [0, 1), 53 bits of precision.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Standard normal variate.
  double normal();

  /// Vector of independent N(0, stddev^2) variates.
  Eigen::VectorXd normal_vector(int dim, double stddev);

 private:
  std::uint64_t state_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

/// Handle for a family of derived random streams. Substreams are keyed by
/// index, so consumers (per-edge draws, per-trial executions) are
/// reproducible independently of evaluation order.
struct RngStream {
  std::uint64_t root = 0;

  NormalSampler sampler(std::uint64_t index) const {
    return NormalSampler(mix64(root, index));
  }
  RngStream fork(std::uint64_t index) const { return RngStream{mix64(root, index)}; }
};

}  // namespace fshare
