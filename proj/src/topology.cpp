#include "fshare/topology.hpp"

#include "fshare/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <functional>
#include <queue>
#include <set>
#include <string>

namespace fshare {

namespace {

void check_agent_id(int n, int i, const char* where) {
  if (i < 1 || i > n) {
    throw DomainError(std::string(where) + ": agent id " + std::to_string(i) +
                      " outside 1.." + std::to_string(n));
  }
}

}  // namespace

Topology::Topology(int n, std::vector<std::pair<int, int>> edges) : n_(n) {
  if (n < 1) throw DomainError("topology: agent count must be positive");
  edges_.reserve(edges.size());
  for (auto [a, b] : edges) {
    check_agent_id(n, a, "topology edge");
    check_agent_id(n, b, "topology edge");
    if (a == b) throw DomainError("topology: self-loop at agent " + std::to_string(a));
    edges_.emplace_back(std::min(a, b), std::max(a, b));
  }
  std::sort(edges_.begin(), edges_.end());
  if (std::adjacent_find(edges_.begin(), edges_.end()) != edges_.end()) {
    throw DomainError("topology: duplicate edge");
  }
  adjacency_.assign(n + 1, {});
  for (auto [i, j] : edges_) {
    adjacency_[i].push_back(j);
    adjacency_[j].push_back(i);
  }
  for (auto& nbrs : adjacency_) std::sort(nbrs.begin(), nbrs.end());
}

bool Topology::has_edge(int i, int j) const { return edge_index(i, j) >= 0; }

int Topology::degree(int i) const {
  check_agent_id(n_, i, "degree");
  return static_cast<int>(adjacency_[i].size());
}

std::vector<int> Topology::neighbors(int i) const {
  check_agent_id(n_, i, "neighbors");
  return adjacency_[i];
}

int Topology::edge_index(int i, int j) const {
  check_agent_id(n_, i, "edge_index");
  check_agent_id(n_, j, "edge_index");
  auto key = std::make_pair(std::min(i, j), std::max(i, j));
  auto it = std::lower_bound(edges_.begin(), edges_.end(), key);
  if (it == edges_.end() || *it != key) return -1;
  return static_cast<int>(it - edges_.begin());
}

InducedSubgraph induced_subgraph(const Topology& topology, const std::vector<int>& keep) {
  if (keep.empty()) throw DomainError("induced_subgraph: keep set is empty");
  const int n = topology.agent_count();
  std::vector<int> old_to_new(n + 1, 0);
  std::vector<int> sorted_keep(keep);
  std::sort(sorted_keep.begin(), sorted_keep.end());
  sorted_keep.erase(std::unique(sorted_keep.begin(), sorted_keep.end()), sorted_keep.end());
  std::vector<int> new_to_old(sorted_keep.size() + 1, 0);
  int next = 1;
  for (int v : sorted_keep) {
    check_agent_id(n, v, "induced_subgraph");
    old_to_new[v] = next;
    new_to_old[next] = v;
    ++next;
  }
  std::vector<std::pair<int, int>> edges;
  for (auto [i, j] : topology.edges()) {
    if (old_to_new[i] != 0 && old_to_new[j] != 0) {
      edges.emplace_back(old_to_new[i], old_to_new[j]);
    }
  }
  return InducedSubgraph{Topology(static_cast<int>(sorted_keep.size()), std::move(edges)),
                         std::move(old_to_new), std::move(new_to_old)};
}

bool is_connected(const Topology& topology) {
  const int n = topology.agent_count();
  std::vector<char> seen(n + 1, 0);
  std::queue<int> frontier;
  frontier.push(1);
  seen[1] = 1;
  int reached = 1;
  while (!frontier.empty()) {
    int v = frontier.front();
    frontier.pop();
    for (int w : topology.neighbors(v)) {
      if (!seen[w]) {
        seen[w] = 1;
        ++reached;
        frontier.push(w);
      }
    }
  }
  return reached == n;
}

bool is_vertex_cut(const Topology& topology, const std::vector<int>& cut) {
  const int n = topology.agent_count();
  std::set<int> removed;
  for (int v : cut) {
    check_agent_id(n, v, "is_vertex_cut");
    removed.insert(v);
  }
  if (static_cast<int>(removed.size()) == n) {
    throw DomainError("is_vertex_cut: cut set must be a strict subset of the agents");
  }
  std::vector<int> keep;
  for (int v = 1; v <= n; ++v) {
    if (!removed.count(v)) keep.push_back(v);
  }
  if (keep.size() == 1) return false;
  return !is_connected(induced_subgraph(topology, keep).topology);
}

namespace {

// Enumerates size-k subsets of 1..n; calls fn(subset) until fn returns true.
bool any_subset(int n, int k, const std::function<bool(const std::vector<int>&)>& fn) {
  std::vector<int> pick(k);
  for (int i = 0; i < k; ++i) pick[i] = i + 1;
  while (true) {
    if (fn(pick)) return true;
    int pos = k - 1;
    while (pos >= 0 && pick[pos] == n - (k - 1 - pos)) --pos;
    if (pos < 0) return false;
    ++pick[pos];
    for (int i = pos + 1; i < k; ++i) pick[i] = pick[i - 1] + 1;
  }
}

}  // namespace

int vertex_connectivity(const Topology& topology) {
  const int n = topology.agent_count();
  if (n < 2) throw DomainError("vertex_connectivity: needs at least 2 agents");
  if (!is_connected(topology)) return 0;
  if (topology.edge_count() == n * (n - 1) / 2) return n - 1;
  if (n > 20) {
    throw DomainError("vertex_connectivity: exhaustive enumeration capped at n <= 20");
  }
  for (int k = 1; k <= n - 2; ++k) {
    if (any_subset(n, k, [&](const std::vector<int>& cut) {
          return is_vertex_cut(topology, cut);
        })) {
      return k;
    }
  }
  // A connected non-complete graph always has a cut of size <= n-2.
  throw NumericError("vertex_connectivity: no cut found in a non-complete graph");
}

Topology topology_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("n") || !j.contains("edges")) {
    throw DomainError("topology: expected object with \"n\" and \"edges\"");
  }
  int n = j.at("n").get<int>();
  std::vector<std::pair<int, int>> edges;
  for (const auto& e : j.at("edges")) {
    if (!e.is_array() || e.size() != 2) {
      throw DomainError("topology: each edge must be a pair [i, j]");
    }
    int a = e.at(0).get<int>();
    int b = e.at(1).get<int>();
    if (a >= b) {
      throw DomainError("topology: edge [" + std::to_string(a) + ", " + std::to_string(b) +
                        "] must satisfy i < j");
    }
    edges.emplace_back(a, b);
  }
  return Topology(n, std::move(edges));
}

nlohmann::json topology_to_json(const Topology& topology) {
  nlohmann::json edges = nlohmann::json::array();
  for (auto [i, j] : topology.edges()) edges.push_back({i, j});
  return {{"n", topology.agent_count()}, {"edges", edges}};
}

}  // namespace fshare
