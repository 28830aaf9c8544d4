#pragma once

#include <json.hpp>

#include <utility>
#include <vector>

namespace fshare {

/// Undirected communication graph over agents 1..n.
///
/// Edges are stored as (i, j) pairs with i < j in lexicographic order; that
/// fixed order doubles as the oriented edge list used to index incidence
/// matrix columns and per-edge noise streams.
class Topology {
 public:
  /// Builds a graph over agents 1..n. Endpoint order within a pair does not
  /// matter; self-loops, duplicates and out-of-range ids are rejected.
  Topology(int n, std::vector<std::pair<int, int>> edges);

  int agent_count() const { return n_; }
  int edge_count() const { return static_cast<int>(edges_.size()); }

  /// Edges as (i, j), i < j, sorted lexicographically.
  const std::vector<std::pair<int, int>>& edges() const { return edges_; }

  bool has_edge(int i, int j) const;
  int degree(int i) const;

  /// Neighbor set of agent i, ascending.
  std::vector<int> neighbors(int i) const;

  /// Position of edge {i, j} in edges(), or -1 if absent.
  int edge_index(int i, int j) const;

 private:
  int n_;
  std::vector<std::pair<int, int>> edges_;
  std::vector<std::vector<int>> adjacency_;  // 1-indexed, [0] unused
};

/// Result of restricting a graph to a subset of its agents.
struct InducedSubgraph {
  Topology topology;
  std::vector<int> old_to_new;  // 1-indexed; 0 marks a removed agent
  std::vector<int> new_to_old;  // 1-indexed
};

/// Subgraph induced by `keep` (nonempty), with agents renumbered 1..|keep|
/// preserving relative order.
InducedSubgraph induced_subgraph(const Topology& topology, const std::vector<int>& keep);

/// True iff the graph has a single connected component (n >= 1).
bool is_connected(const Topology& topology);

/// True iff removing `cut` (a strict subset of the agents) disconnects the
/// remainder. A removal that leaves a single agent never counts as a cut.
bool is_vertex_cut(const Topology& topology, const std::vector<int>& cut);

/// Size of the smallest vertex cut, by exhaustive enumeration in increasing
/// cut size (feasible at the scales this toolkit targets). Complete graphs
/// return n-1 by convention; a disconnected graph returns 0.
int vertex_connectivity(const Topology& topology);

/// Parses { "n": int, "edges": [[i, j], ...] }; requires i < j.
Topology topology_from_json(const nlohmann::json& j);
nlohmann::json topology_to_json(const Topology& topology);

}  // namespace fshare
