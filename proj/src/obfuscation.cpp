#include "fshare/obfuscation.hpp"

#include "fshare/errors.hpp"
#include "fshare/spectral.hpp"

#include <string>

namespace fshare {

int directed_edge_substream(const Topology& topology, int from, int to) {
  const int idx = topology.edge_index(from, to);
  if (idx < 0) {
    throw DomainError("directed_edge_substream: {" + std::to_string(from) + ", " +
                      std::to_string(to) + "} is not an edge");
  }
  return 2 * idx + (from < to ? 0 : 1);
}

PairwiseNoise draw_noise(const Topology& topology, double sigma, int dim,
                         const RngStream& stream) {
  if (!(sigma > 0.0)) throw DomainError("draw_noise: sigma must be positive");
  if (dim < 1) throw DomainError("draw_noise: dimension must be positive");
  PairwiseNoise noise;
  noise.dimension = dim;
  for (auto [i, j] : topology.edges()) {
    for (auto [from, to] : {std::pair{i, j}, std::pair{j, i}}) {
      NormalSampler sampler = stream.sampler(directed_edge_substream(topology, from, to));
      noise.r.emplace(std::pair{from, to}, sampler.normal_vector(dim, sigma));
    }
  }
  return noise;
}

MaskSet compute_masks(const Topology& topology, const PairwiseNoise& noise) {
  MaskSet masks;
  for (int i = 1; i <= topology.agent_count(); ++i) {
    Eigen::VectorXd u = Eigen::VectorXd::Zero(noise.dimension);
    for (int j : topology.neighbors(i)) {
      auto sent = noise.r.find({i, j});
      auto received = noise.r.find({j, i});
      if (sent == noise.r.end() || received == noise.r.end()) {
        throw DomainError("compute_masks: noise missing for edge {" + std::to_string(i) +
                          ", " + std::to_string(j) + "}");
      }
      u += sent->second - received->second;
    }
    masks.u.emplace(i, std::move(u));
  }
  return masks;
}

std::vector<Cost> effective_costs(std::span<const Cost> costs, const MaskSet& masks) {
  if (costs.size() != masks.u.size()) {
    throw DomainError("effective_costs: mask count does not match cost count");
  }
  std::vector<Cost> out;
  out.reserve(costs.size());
  for (size_t i = 0; i < costs.size(); ++i) {
    const Eigen::VectorXd& u = masks.u.at(static_cast<int>(i) + 1);
    if (u.size() != dimension(costs[i])) {
      throw DomainError("effective_costs: mask dimension does not match cost " +
                        std::to_string(i + 1));
    }
    out.push_back(with_affine_coefficient(costs[i], affine_coefficient(costs[i]) + u));
  }
  return out;
}

std::vector<Cost> mask_degree(std::span<const Cost> costs, int ell,
                              const Topology& topology, double sigma,
                              const RngStream& stream) {
  if (costs.size() != static_cast<size_t>(topology.agent_count())) {
    throw DomainError("mask_degree: one cost per agent required");
  }
  for (const Cost& c : costs) {
    if (!std::holds_alternative<PolynomialCost>(c)) {
      throw DomainError("mask_degree: costs must be univariate polynomials");
    }
    if (ell < 1 || ell > std::get<PolynomialCost>(c).degree()) {
      throw DomainError("mask_degree: degree index " + std::to_string(ell) +
                        " out of range");
    }
  }
  PairwiseNoise noise = draw_noise(topology, sigma, 1, stream);
  MaskSet masks = compute_masks(topology, noise);
  std::vector<Cost> out(costs.begin(), costs.end());
  for (size_t i = 0; i < out.size(); ++i) {
    std::get<PolynomialCost>(out[i]).coeffs[ell] += masks.u.at(static_cast<int>(i) + 1)[0];
  }
  return out;
}

std::vector<Cost> mask_all_degrees(std::span<const Cost> costs, const Topology& topology,
                                   double sigma, const RngStream& stream) {
  if (costs.empty()) throw DomainError("mask_all_degrees: empty cost list");
  int max_degree = 0;
  for (const Cost& c : costs) {
    if (!std::holds_alternative<PolynomialCost>(c)) {
      throw DomainError("mask_all_degrees: costs must be univariate polynomials");
    }
    max_degree = std::max(max_degree, std::get<PolynomialCost>(c).degree());
  }
  for (const Cost& c : costs) {
    if (std::get<PolynomialCost>(c).degree() != max_degree) {
      throw DomainError("mask_all_degrees: costs must share one degree");
    }
  }
  std::vector<Cost> out(costs.begin(), costs.end());
  for (int ell = 1; ell <= max_degree; ++ell) {
    out = mask_degree(out, ell, topology, sigma, stream.fork(ell));
  }
  return out;
}

PhaseOneRecord run_phase_one(const Topology& topology, std::span<const Cost> costs,
                             double sigma, const RngStream& stream) {
  if (costs.size() != static_cast<size_t>(topology.agent_count())) {
    throw DomainError("run_phase_one: one cost per agent required");
  }
  PhaseOneRecord record;
  record.costs.assign(costs.begin(), costs.end());
  record.noise = draw_noise(topology, sigma, dimension(costs[0]), stream);
  record.masks = compute_masks(topology, record.noise);
  record.effective = effective_costs(costs, record.masks);
  return record;
}

nlohmann::json trace_json(const PairwiseNoise& noise, const MaskSet& masks) {
  nlohmann::json r = nlohmann::json::object();
  for (const auto& [key, value] : noise.r) {
    r[std::to_string(key.first) + "->" + std::to_string(key.second)] = vector_to_json(value);
  }
  nlohmann::json u = nlohmann::json::object();
  for (const auto& [agent, value] : masks.u) {
    u[std::to_string(agent)] = vector_to_json(value);
  }
  return {{"r", r}, {"u", u}};
}

}  // namespace fshare
