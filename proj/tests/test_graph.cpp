#include <algorithm>
#include <set>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "teamnet/graph.hpp"

using namespace teamnet;

namespace {

Graph path3() {
  Graph g(3);
  g.add_edge(0, 1);
  g.add_edge(1, 2);
  return g;
}

std::set<std::pair<AgentId, AgentId>> edge_set(const Graph& g) {
  std::set<std::pair<AgentId, AgentId>> edges;
  for (AgentId i = 0; i < g.node_count(); ++i)
    for (AgentId j : g.neighbors(i))
      if (i < j) edges.insert({i, j});
  return edges;
}

}  // namespace

TEST_CASE("ring lattice n=4 k=2 is the cycle C4") {
  const Graph g = generate(4, {TopologyKind::ring_lattice, 2, 0});
  CHECK(g.edge_count() == 4);
  for (AgentId i = 0; i < 4; ++i) CHECK(g.degree(i) == 2);
  CHECK(edge_set(g) == std::set<std::pair<AgentId, AgentId>>{{0, 1}, {1, 2}, {2, 3}, {0, 3}});
}

TEST_CASE("gnm n=3 m=3 is the triangle") {
  const Graph g = generate(3, {TopologyKind::random_gnm, 3, 99});
  CHECK(edge_set(g) == std::set<std::pair<AgentId, AgentId>>{{0, 1}, {0, 2}, {1, 2}});
}

TEST_CASE("gnm generation is a deterministic function of (n, spec)") {
  const Graph a = generate(50, {TopologyKind::random_gnm, 50, 7});
  const Graph b = generate(50, {TopologyKind::random_gnm, 50, 7});
  CHECK(a == b);
  const Graph c = generate(50, {TopologyKind::random_gnm, 50, 8});
  CHECK(a != c);
}

TEST_CASE("generators reject infeasible parameters naming the key") {
  CHECK_THROWS_WITH_AS(generate(4, {TopologyKind::random_gnm, 7, 0}), doctest::Contains("topology.m"),
                       ConfigError);
  CHECK_THROWS_WITH_AS(generate(4, {TopologyKind::ring_lattice, 3, 0}), doctest::Contains("topology.k"),
                       ConfigError);
  CHECK_THROWS_WITH_AS(generate(4, {TopologyKind::ring_lattice, 4, 0}), doctest::Contains("topology.k"),
                       ConfigError);
  CHECK_THROWS_WITH_AS(generate(4, {TopologyKind::preferential_attachment, 0, 0}),
                       doctest::Contains("topology.attach"), ConfigError);
  CHECK_THROWS_AS(generate(0, {TopologyKind::random_gnm, 0, 0}), ConfigError);
}

TEST_CASE("preferential attachment grows the expected edge count") {
  const Graph g = generate(30, {TopologyKind::preferential_attachment, 2, 5});
  CHECK(g.node_count() == 30);
  // seed clique C(3,2)=3 edges, then 27 nodes attaching twice each
  CHECK(g.edge_count() == 3 + 27 * 2);
  g.check_invariants();
}

TEST_CASE("degree counts connections") {
  const Graph p = path3();
  CHECK(p.degree(1) == 2);
  CHECK(Graph(1).degree(0) == 0);
  const Graph k4 = generate(4, {TopologyKind::random_gnm, 6, 0});
  for (AgentId i = 0; i < 4; ++i) CHECK(k4.degree(i) == 3);
  CHECK_THROWS_AS(p.degree(3), std::out_of_range);
}

TEST_CASE("neighbors are ascending and empty for isolated nodes") {
  Graph star(4);
  star.add_edge(0, 3);
  star.add_edge(0, 1);
  star.add_edge(0, 2);
  CHECK(star.neighbors(0) == std::vector<AgentId>{1, 2, 3});
  CHECK(Graph(2).neighbors(1).empty());
  CHECK(path3().neighbors(2) == std::vector<AgentId>{1});
}

TEST_CASE("rewire swaps exactly one endpoint atomically") {
  Graph g = path3();
  REQUIRE(g.rewire(0, 1, 2));
  CHECK(edge_set(g) == std::set<std::pair<AgentId, AgentId>>{{0, 2}, {1, 2}});
  CHECK(g.edge_count() == 2);
  CHECK(g.degree(0) == 1);
}

TEST_CASE("rewire rejects violated preconditions without mutating") {
  Graph g = path3();
  const Graph before = g;
  CHECK_FALSE(g.rewire(0, 1, 1));   // remove == add
  CHECK_FALSE(g.rewire(0, 2, 1));   // edge(0,2) absent, edge(0,1) present
  CHECK_FALSE(g.rewire(1, 0, 2));   // edge(1,2) already present
  CHECK_FALSE(g.rewire(0, 1, 0));   // add == self
  CHECK(g == before);
}

TEST_CASE("is_team_connected handles paths, full sets and singletons") {
  const Graph p = path3();
  const AgentId both_ends[] = {0, 2};
  const AgentId all[] = {0, 1, 2};
  CHECK_FALSE(is_team_connected(p, both_ends));
  CHECK(is_team_connected(p, all));
  Graph g(6);
  const AgentId singleton[] = {5};
  CHECK(is_team_connected(g, singleton));
  CHECK(is_team_connected(g, {}));
}

TEST_CASE("graph invariants hold under random mutation sequences") {
  Rng rng(2024);
  for (int trial = 0; trial < 50; ++trial) {
    Graph g = oracle::random_graph(rng, 8);
    const std::size_t edges = g.edge_count();
    // exercise rewires from random starting points
    for (int step = 0; step < 30; ++step) {
      const AgentId i = static_cast<AgentId>(rng.uniform_below(g.node_count()));
      if (g.degree(i) == 0) continue;
      const auto& nbrs = g.neighbors(i);
      const AgentId remove = nbrs[rng.uniform_below(nbrs.size())];
      const AgentId add = static_cast<AgentId>(rng.uniform_below(g.node_count()));
      const std::uint32_t deg_before = g.degree(i);
      if (g.rewire(i, remove, add)) {
        CHECK(g.degree(i) == deg_before);
        CHECK(g.edge_count() == edges);
      }
    }
    g.check_invariants();
    std::size_t degree_sum = 0;
    for (AgentId i = 0; i < g.node_count(); ++i) {
      CHECK(g.degree(i) == g.neighbors(i).size());
      degree_sum += g.degree(i);
    }
    CHECK(degree_sum == 2 * g.edge_count());
  }
}

TEST_CASE("is_team_connected agrees with the brute-force oracle on small graphs") {
  Rng rng(555);
  for (int trial = 0; trial < 100; ++trial) {
    const Graph g = oracle::random_graph(rng, 7);
    const std::uint32_t n = g.node_count();
    if (n <= 5) {
      // every subset
      for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
        std::vector<AgentId> members;
        for (std::uint32_t b = 0; b < n; ++b)
          if (mask & (1u << b)) members.push_back(b);
        CHECK(is_team_connected(g, members) == oracle::connected_subset_bruteforce(g, members));
      }
    } else {
      for (int s = 0; s < 40; ++s) {
        std::vector<AgentId> members;
        for (std::uint32_t b = 0; b < n; ++b)
          if (rng.uniform_below(2)) members.push_back(b);
        CHECK(is_team_connected(g, members) == oracle::connected_subset_bruteforce(g, members));
      }
    }
  }
}

TEST_CASE("edge mutations reject self-loops, duplicates and bad ids") {
  Graph g(3);
  CHECK_THROWS_AS(g.add_edge(1, 1), std::invalid_argument);
  g.add_edge(0, 1);
  CHECK_THROWS_AS(g.add_edge(1, 0), std::invalid_argument);
  CHECK_THROWS_AS(g.add_edge(0, 5), std::out_of_range);
  CHECK_THROWS_AS(g.remove_edge(0, 2), std::invalid_argument);
  CHECK(g.has_edge(1, 0));
}
