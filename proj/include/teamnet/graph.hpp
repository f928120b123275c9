#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "teamnet/rng.hpp"
#include "teamnet/types.hpp"

namespace teamnet {

/// Undirected simple graph over dense agent ids [0, n).
///
/// Adjacency rows are kept sorted ascending so neighbor iteration order is
/// deterministic and every downstream tie-break is reproducible. Symmetry and
/// the no-self-loop rule are enforced on every mutation.
class Graph {
 public:
  Graph() = default;
  explicit Graph(std::uint32_t n) : adj_(n) {}

  std::uint32_t node_count() const { return static_cast<std::uint32_t>(adj_.size()); }
  std::size_t edge_count() const { return edge_count_; }

  bool has_edge(AgentId i, AgentId j) const {
    check_id(i);
    check_id(j);
    return std::binary_search(adj_[i].begin(), adj_[i].end(), j);
  }

  void add_edge(AgentId i, AgentId j) {
    check_id(i);
    check_id(j);
    if (i == j) throw std::invalid_argument("add_edge: self-loop " + std::to_string(i));
    if (has_edge(i, j)) throw std::invalid_argument("add_edge: duplicate edge");
    insert_sorted(adj_[i], j);
    insert_sorted(adj_[j], i);
    ++edge_count_;
  }

  void remove_edge(AgentId i, AgentId j) {
    check_id(i);
    check_id(j);
    if (!has_edge(i, j)) throw std::invalid_argument("remove_edge: no such edge");
    erase_sorted(adj_[i], j);
    erase_sorted(adj_[j], i);
    --edge_count_;
  }

  /// k_i: the number of connections of agent i (row sum of the adjacency matrix).
  std::uint32_t degree(AgentId i) const {
    check_id(i);
    return static_cast<std::uint32_t>(adj_[i].size());
  }

  /// All j with an edge to i, ascending by id.
  const std::vector<AgentId>& neighbors(AgentId i) const {
    check_id(i);
    return adj_[i];
  }

  /// Atomically drop edge (i, remove) and create edge (i, add). Leaves the
  /// total edge count and degree(i) unchanged. Returns false (and mutates
  /// nothing) when a precondition fails; the caller treats that as an
  /// aborted adaptation.
  bool rewire(AgentId i, AgentId remove, AgentId add) {
    check_id(i);
    check_id(remove);
    check_id(add);
    if (add == i || remove == add) return false;
    if (!has_edge(i, remove) || has_edge(i, add)) return false;
    remove_edge(i, remove);
    add_edge(i, add);
    return true;
  }

  bool operator==(const Graph&) const = default;

  /// Full structural audit: symmetry, no self-loops, sorted unique rows,
  /// degree sum == 2 * edge count. Throws InvariantError on any breach.
  void check_invariants() const {
    std::size_t degree_sum = 0;
    for (AgentId i = 0; i < adj_.size(); ++i) {
      const auto& row = adj_[i];
      for (std::size_t k = 0; k < row.size(); ++k) {
        const AgentId j = row[k];
        if (j >= adj_.size()) throw InvariantError("graph: neighbor id out of range");
        if (j == i) throw InvariantError("graph: self-loop at " + std::to_string(i));
        if (k > 0 && row[k - 1] >= j) throw InvariantError("graph: row not sorted/unique");
        if (!std::binary_search(adj_[j].begin(), adj_[j].end(), i))
          throw InvariantError("graph: asymmetric edge " + std::to_string(i) + "-" + std::to_string(j));
      }
      degree_sum += row.size();
    }
    if (degree_sum != 2 * edge_count_) throw InvariantError("graph: edge count out of sync");
  }

 private:
  void check_id(AgentId i) const {
    if (i >= adj_.size()) throw std::out_of_range("graph: agent id " + std::to_string(i) + " out of range");
  }

  static void insert_sorted(std::vector<AgentId>& row, AgentId v) {
    row.insert(std::lower_bound(row.begin(), row.end(), v), v);
  }

  static void erase_sorted(std::vector<AgentId>& row, AgentId v) {
    row.erase(std::lower_bound(row.begin(), row.end(), v));
  }

  std::vector<std::vector<AgentId>> adj_;
  std::size_t edge_count_ = 0;
};

/// True iff the subgraph induced by `members` is connected. The empty set and
/// singletons count as connected, so team startup and one-member teams pass
/// the same predicate.
inline bool is_team_connected(const Graph& g, std::span<const AgentId> members) {
  const std::uint32_t n = g.node_count();
  for (AgentId m : members)
    if (m >= n) throw std::out_of_range("is_team_connected: member id out of range");

  std::vector<char> in_team(n, 0);
  std::size_t distinct = 0;
  for (AgentId m : members) {
    if (!in_team[m]) {
      in_team[m] = 1;
      ++distinct;
    }
  }
  if (distinct <= 1) return true;

  std::vector<AgentId> stack{members[0]};
  std::vector<char> seen(n, 0);
  seen[members[0]] = 1;
  std::size_t reached = 1;
  while (!stack.empty()) {
    const AgentId u = stack.back();
    stack.pop_back();
    for (AgentId v : g.neighbors(u)) {
      if (in_team[v] && !seen[v]) {
        seen[v] = 1;
        ++reached;
        stack.push_back(v);
      }
    }
  }
  return reached == distinct;
}

enum class TopologyKind { random_gnm, ring_lattice, preferential_attachment };

inline std::string_view topology_kind_name(TopologyKind k) {
  switch (k) {
    case TopologyKind::random_gnm: return "random_gnm";
    case TopologyKind::ring_lattice: return "ring_lattice";
    case TopologyKind::preferential_attachment: return "preferential_attachment";
  }
  return "?";
}

inline TopologyKind topology_kind_from_name(std::string_view name) {
  if (name == "random_gnm") return TopologyKind::random_gnm;
  if (name == "ring_lattice") return TopologyKind::ring_lattice;
  if (name == "preferential_attachment") return TopologyKind::preferential_attachment;
  throw ConfigError("topology.kind", "unknown topology kind '" + std::string(name) + "'");
}

/// Initial-topology recipe. `param` is the edge count m (random_gnm), the
/// lattice degree k (ring_lattice) or the per-node attachment count
/// (preferential_attachment).
struct TopologySpec {
  TopologyKind kind = TopologyKind::random_gnm;
  std::uint64_t param = 0;
  std::uint64_t seed = 0;
};

namespace detail {

inline Graph generate_gnm(std::uint32_t n, std::uint64_t m, std::uint64_t seed) {
  const std::uint64_t max_edges = static_cast<std::uint64_t>(n) * (n - 1) / 2;
  if (m > max_edges)
    throw ConfigError("topology.m",
                      "edge count " + std::to_string(m) + " exceeds maximum " + std::to_string(max_edges) +
                          " for " + std::to_string(n) + " nodes");
  std::vector<std::pair<AgentId, AgentId>> pairs;
  pairs.reserve(max_edges);
  for (AgentId i = 0; i < n; ++i)
    for (AgentId j = i + 1; j < n; ++j) pairs.emplace_back(i, j);

  // Partial Fisher-Yates: the first m entries are a uniform m-subset.
  Rng rng(seed);
  Graph g(n);
  for (std::uint64_t t = 0; t < m; ++t) {
    const std::uint64_t pick = t + rng.uniform_below(pairs.size() - t);
    std::swap(pairs[t], pairs[pick]);
    g.add_edge(pairs[t].first, pairs[t].second);
  }
  return g;
}

inline Graph generate_ring_lattice(std::uint32_t n, std::uint64_t k) {
  if (k % 2 != 0) throw ConfigError("topology.k", "lattice degree must be even, got " + std::to_string(k));
  if (k >= n)
    throw ConfigError("topology.k",
                      "lattice degree " + std::to_string(k) + " must be below node count " + std::to_string(n));
  Graph g(n);
  for (std::uint64_t d = 1; d <= k / 2; ++d)
    for (AgentId i = 0; i < n; ++i) g.add_edge(i, static_cast<AgentId>((i + d) % n));
  return g;
}

inline Graph generate_preferential_attachment(std::uint32_t n, std::uint64_t attach, std::uint64_t seed) {
  if (attach < 1 || attach >= n)
    throw ConfigError("topology.attach",
                      "attachment count must be in [1, " + std::to_string(n - 1) + "], got " + std::to_string(attach));
  Rng rng(seed);
  Graph g(n);
  // Seed clique on the first attach+1 nodes, then degree-proportional growth.
  std::vector<AgentId> endpoints;
  for (AgentId i = 0; i <= attach; ++i)
    for (AgentId j = i + 1; j <= attach; ++j) {
      g.add_edge(i, j);
      endpoints.push_back(i);
      endpoints.push_back(j);
    }
  std::vector<AgentId> targets;
  for (AgentId v = static_cast<AgentId>(attach + 1); v < n; ++v) {
    targets.clear();
    while (targets.size() < attach) {
      const AgentId cand = endpoints[rng.uniform_below(endpoints.size())];
      if (std::find(targets.begin(), targets.end(), cand) == targets.end()) targets.push_back(cand);
    }
    for (AgentId t : targets) {
      g.add_edge(v, t);
      endpoints.push_back(v);
      endpoints.push_back(t);
    }
  }
  return g;
}

}  // namespace detail

/// Deterministic function of (n, spec): same inputs, same edge set.
inline Graph generate(std::uint32_t n, const TopologySpec& spec) {
  if (n < 1) throw ConfigError("n_agents", "need at least one agent");
  switch (spec.kind) {
    case TopologyKind::random_gnm: return detail::generate_gnm(n, spec.param, spec.seed);
    case TopologyKind::ring_lattice: return detail::generate_ring_lattice(n, spec.param);
    case TopologyKind::preferential_attachment:
      return detail::generate_preferential_attachment(n, spec.param, spec.seed);
  }
  throw ConfigError("topology.kind", "unhandled topology kind");
}

}  // namespace teamnet
