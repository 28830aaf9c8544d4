#pragma once

#include "fshare/cost.hpp"
#include "fshare/rng.hpp"
#include "fshare/topology.hpp"

#include <map>
#include <utility>
#include <vector>

namespace fshare {

/// One m-vector r_ij per ordered edge direction (two entries per undirected
/// edge): the noise agent i draws for neighbor j.
struct PairwiseNoise {
  std::map<std::pair<int, int>, Eigen::VectorXd> r;
  int dimension = 1;
};

/// Per-agent masks u_i = sum_{j in N_i} (r_ij - r_ji). The masks sum to the
/// zero vector over all agents.
struct MaskSet {
  std::map<int, Eigen::VectorXd> u;
};

/// Index of the directed edge (i -> j) in the fixed stream enumeration:
/// edge l of the oriented edge list owns substreams 2l (i -> j, i < j) and
/// 2l + 1 (j -> i).
int directed_edge_substream(const Topology& topology, int from, int to);

/// Draws r_ij ~ N(0, sigma^2 I_m) independently for every ordered edge
/// direction. Each directed edge gets its own derived substream, so the
/// result is reproducible and independent of traversal order.
PairwiseNoise draw_noise(const Topology& topology, double sigma, int dim,
                         const RngStream& stream);

MaskSet compute_masks(const Topology& topology, const PairwiseNoise& noise);

/// Shifts every agent's affine coefficient by its mask. The sum of the
/// effective costs equals the sum of the originals at every point.
std::vector<Cost> effective_costs(std::span<const Cost> costs, const MaskSet& masks);

/// Masks the degree-ell coefficients of univariate polynomial costs with a
/// fresh zero-sum noise exchange; the coefficient sum at that degree is
/// preserved and other degrees are untouched.
std::vector<Cost> mask_degree(std::span<const Cost> costs, int ell,
                              const Topology& topology, double sigma,
                              const RngStream& stream);

/// Applies mask_degree with independent noise for every ell = 1..d.
std::vector<Cost> mask_all_degrees(std::span<const Cost> costs, const Topology& topology,
                                   double sigma, const RngStream& stream);

/// Everything one masking round produces; the adversary module assembles
/// views from this record.
struct PhaseOneRecord {
  std::vector<Cost> costs;  // originals
  PairwiseNoise noise;
  MaskSet masks;
  std::vector<Cost> effective;
};

PhaseOneRecord run_phase_one(const Topology& topology, std::span<const Cost> costs,
                             double sigma, const RngStream& stream);

/// Audit dump: { "r": {"i->j": [...]}, "u": {"i": [...]} }.
nlohmann::json trace_json(const PairwiseNoise& noise, const MaskSet& masks);

}  // namespace fshare
