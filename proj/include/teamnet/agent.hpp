#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "teamnet/types.hpp"

namespace teamnet {

enum class Phase { uncommitted, committed, active };

inline const char* phase_name(Phase p) {
  switch (p) {
    case Phase::uncommitted: return "uncommitted";
    case Phase::committed: return "committed";
    case Phase::active: return "active";
  }
  return "?";
}

// Legal lifecycle moves:
//   uncommitted -> committed   (proposal sent)
//   committed   -> active      (accepted into a team)
//   committed   -> uncommitted (rejected)
//   active      -> uncommitted (team confirmed or failed)
inline bool transition_allowed(Phase from, Phase to) {
  switch (from) {
    case Phase::uncommitted: return to == Phase::committed;
    case Phase::committed: return to == Phase::active || to == Phase::uncommitted;
    case Phase::active: return to == Phase::uncommitted;
  }
  return false;
}

struct AgentState {
  Phase phase = Phase::uncommitted;
  TaskId task = 0;  // meaningful only when committed/active
};

/// Lifetime acceptance ratio Y: successes/attempts, valid once the agent has
/// tried to enter a team at least `validity_threshold` times.
struct PerformanceTracker {
  std::uint64_t attempts = 0;
  std::uint64_t successes = 0;
  std::uint32_t validity_threshold = 10;

  bool valid() const { return attempts >= validity_threshold; }

  std::optional<double> performance() const {
    if (attempts == 0) return std::nullopt;
    return static_cast<double>(successes) / static_cast<double>(attempts);
  }

  // What the agent reports when queried; zero-attempt agents report 0.
  double reported() const { return attempts == 0 ? 0.0 : static_cast<double>(successes) / static_cast<double>(attempts); }

  // Every decision counts as an attempt; acceptance counts as a success
  // whether or not the team later completes.
  void record(bool accepted) {
    ++attempts;
    if (accepted) ++successes;
  }
};

struct Agent {
  AgentId id = 0;
  Skill skill = 1;
  AgentState state;
  PerformanceTracker perf;
};

inline void apply_transition(Agent& a, Phase to, TaskId task) {
  if (!transition_allowed(a.state.phase, to))
    throw InvariantError("agent " + std::to_string(a.id) + ": illegal transition " +
                         std::string(phase_name(a.state.phase)) + " -> " + phase_name(to));
  a.state.phase = to;
  a.state.task = (to == Phase::uncommitted) ? 0 : task;
}

struct NeighborPerf {
  AgentId id;
  double perf;
};

// Adaptation trigger: self performance strictly below the neighbor mean.
inline bool adaptation_trigger(double self_perf, std::span<const double> neighbor_perfs) {
  if (neighbor_perfs.empty()) return false;
  double sum = 0.0;
  for (double y : neighbor_perfs) sum += y;
  return self_perf < sum / static_cast<double>(neighbor_perfs.size());
}

/// True iff the tracker is valid, there is at least one neighbor, and the
/// agent's performance is below the mean of its neighbors' reported values.
inline bool should_adapt(const PerformanceTracker& self, std::span<const double> neighbor_perfs) {
  return self.valid() && adaptation_trigger(self.reported(), neighbor_perfs);
}

/// Neighbor with the smallest performance; ties broken by lowest id.
inline AgentId select_removal(std::span<const NeighborPerf> neighbor_perfs) {
  if (neighbor_perfs.empty()) throw std::invalid_argument("select_removal: no neighbors");
  const NeighborPerf* best = &neighbor_perfs[0];
  for (const auto& np : neighbor_perfs.subspan(1))
    if (np.perf < best->perf || (np.perf == best->perf && np.id < best->id)) best = &np;
  return best->id;
}

/// Neighbor with the highest performance; ties broken by lowest id.
inline AgentId select_referrer(std::span<const NeighborPerf> neighbor_perfs) {
  if (neighbor_perfs.empty()) throw std::invalid_argument("select_referrer: no neighbors");
  const NeighborPerf* best = &neighbor_perfs[0];
  for (const auto& np : neighbor_perfs.subspan(1))
    if (np.perf > best->perf || (np.perf == best->perf && np.id < best->id)) best = &np;
  return best->id;
}

/// Best-performing neighbor of the referrer that is neither the requester nor
/// already one of the requester's neighbors. `requester_neighbors` must be
/// sorted ascending. Returns nullopt when no candidate remains, in which case
/// the adaptation aborts with no rewiring.
inline std::optional<AgentId> select_referral(std::span<const NeighborPerf> referrer_neighbor_perfs,
                                              AgentId requester,
                                              std::span<const AgentId> requester_neighbors) {
  const NeighborPerf* best = nullptr;
  for (const auto& np : referrer_neighbor_perfs) {
    if (np.id == requester) continue;
    if (std::binary_search(requester_neighbors.begin(), requester_neighbors.end(), np.id)) continue;
    if (best == nullptr || np.perf > best->perf || (np.perf == best->perf && np.id < best->id)) best = &np;
  }
  if (best == nullptr) return std::nullopt;
  return best->id;
}

}  // namespace teamnet
