#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "teamnet/agent.hpp"
#include "teamnet/graph.hpp"
#include "teamnet/rng.hpp"
#include "teamnet/types.hpp"

namespace teamnet {

/// A required-skill vector with its announcement window.
struct Task {
  TaskId id = 0;
  std::vector<Skill> required;  // size |k|, repeats allowed
  Tick announced_at = 0;
  Tick deadline = 0;  // announced_at + timeout
};

struct TeamSlot {
  Skill skill;
  std::optional<AgentId> agent;
};

/// Per-task membership. Members always induce a connected subgraph at every
/// acceptance instant; distinct slots hold distinct agents.
struct Team {
  TaskId task = 0;
  std::vector<TeamSlot> slots;
  std::vector<AgentId> members;  // ascending

  bool full() const {
    for (const auto& s : slots)
      if (!s.agent) return false;
    return true;
  }

  bool has_member(AgentId a) const { return std::binary_search(members.begin(), members.end(), a); }

  std::optional<std::size_t> open_slot(Skill skill) const {
    for (std::size_t i = 0; i < slots.size(); ++i)
      if (slots[i].skill == skill && !slots[i].agent) return i;
    return std::nullopt;
  }

  void fill(std::size_t slot, AgentId a) {
    slots[slot].agent = a;
    members.insert(std::lower_bound(members.begin(), members.end(), a), a);
  }
};

inline Team make_team(const Task& t) {
  Team team;
  team.task = t.id;
  team.slots.reserve(t.required.size());
  for (Skill s : t.required) team.slots.push_back(TeamSlot{s, std::nullopt});
  return team;
}

enum class Performative {
  propose,
  acceptproposal,
  rejectproposal,
  confirm,
  failure,
  queryif,
  informif,
  proxy,
  referralreply
};

inline const char* performative_name(Performative p) {
  switch (p) {
    case Performative::propose: return "propose";
    case Performative::acceptproposal: return "acceptproposal";
    case Performative::rejectproposal: return "rejectproposal";
    case Performative::confirm: return "confirm";
    case Performative::failure: return "failure";
    case Performative::queryif: return "queryif";
    case Performative::informif: return "informif";
    case Performative::proxy: return "proxy";
    case Performative::referralreply: return "referralreply";
  }
  return "?";
}

enum class RejectReason { no_open_slot, not_connected, stale };

inline const char* reject_reason_name(RejectReason r) {
  switch (r) {
    case RejectReason::no_open_slot: return "no_open_slot";
    case RejectReason::not_connected: return "not_connected";
    case RejectReason::stale: return "stale";
  }
  return "?";
}

/// Message endpoint: one of the two coordinator roles or a task agent.
struct Actor {
  enum class Kind : std::uint8_t { manager, scheduler, agent } kind = Kind::agent;
  AgentId id = 0;  // meaningful only for Kind::agent

  static Actor manager() { return Actor{Kind::manager, 0}; }
  static Actor scheduler() { return Actor{Kind::scheduler, 0}; }
  static Actor agent(AgentId a) { return Actor{Kind::agent, a}; }

  bool operator==(const Actor&) const = default;
};

/// Tagged performative plus the payload fields that performative uses.
struct Message {
  Performative performative;
  Actor from;
  Actor to;
  std::optional<TaskId> task;          // propose/acceptproposal/rejectproposal/confirm/failure
  std::optional<double> perf_value;    // informif
  std::optional<AgentId> referral;     // referralreply; nullopt payload means "none found"
  std::optional<RejectReason> reason;  // rejectproposal
};

/// A task agent's application for one slot of an open task.
struct Proposal {
  TaskId task = 0;
  AgentId agent = 0;
  Skill skill = 1;
};

struct Decision {
  Proposal proposal;
  bool accepted = false;
  RejectReason reason = RejectReason::no_open_slot;  // meaningful when !accepted
};

struct EligibilityResult {
  bool accepted = false;
  RejectReason reason = RejectReason::no_open_slot;
  std::size_t slot = 0;  // meaningful when accepted
};

/// Accept iff the team still has an unfilled slot for the skill and the
/// candidate either starts the team or has an edge to a current member.
inline EligibilityResult eligibility(const Graph& g, const Team& team, AgentId candidate, Skill skill) {
  const auto slot = team.open_slot(skill);
  if (!slot) return {false, RejectReason::no_open_slot, 0};
  if (!team.members.empty()) {
    bool linked = false;
    for (AgentId m : team.members) {
      if (g.has_edge(candidate, m)) {
        linked = true;
        break;
      }
    }
    if (!linked) return {false, RejectReason::not_connected, 0};
  }
  return {true, RejectReason::no_open_slot, *slot};
}

struct RoundResult {
  std::vector<Decision> decisions;  // in processing order
  std::vector<Proposal> dropped;    // protocol violations (claimed skill != agent skill)
};

/// Process one round of applications in deterministic order (ascending task
/// id, then ascending agent id), each evaluated against the team state as
/// already updated within this round, so a candidate may become eligible
/// through an agent accepted moments earlier. Exactly one decision per
/// well-formed proposal; proposals for unknown or closed tasks are rejected
/// as stale.
inline RoundResult scheduler_round(const Graph& g, std::span<const Skill> agent_skills,
                                   std::map<TaskId, Team>& open_teams, std::vector<Proposal> proposals) {
  std::sort(proposals.begin(), proposals.end(), [](const Proposal& a, const Proposal& b) {
    return a.task != b.task ? a.task < b.task : a.agent < b.agent;
  });

  RoundResult out;
  out.decisions.reserve(proposals.size());
  for (const Proposal& p : proposals) {
    if (p.agent >= agent_skills.size() || agent_skills[p.agent] != p.skill) {
      out.dropped.push_back(p);
      continue;
    }
    auto it = open_teams.find(p.task);
    if (it == open_teams.end()) {
      out.decisions.push_back({p, false, RejectReason::stale});
      continue;
    }
    Team& team = it->second;
    const EligibilityResult e = eligibility(g, team, p.agent, p.skill);
    if (!e.accepted) {
      out.decisions.push_back({p, false, e.reason});
      continue;
    }
    team.fill(e.slot, p.agent);
    if (!is_team_connected(g, team.members))
      throw InvariantError("scheduler_round: task " + std::to_string(p.task) +
                           " team disconnected after accepting agent " + std::to_string(p.agent));
    out.decisions.push_back({p, true, RejectReason::no_open_slot});
  }
  return out;
}

struct Resolution {
  std::vector<Team> completed;  // ascending task id
  std::vector<Team> expired;    // ascending task id
};

/// Close out teams: fully staffed teams complete (members get confirm), and
/// teams whose deadline has passed expire (members get failure). Completion
/// wins when both hold on the same tick. Closed teams leave `open_teams`.
inline Resolution scheduler_tick(Tick now, const std::vector<Task>& tasks, std::map<TaskId, Team>& open_teams) {
  Resolution res;
  for (auto it = open_teams.begin(); it != open_teams.end();) {
    Team& team = it->second;
    const Task& task = tasks.at(static_cast<std::size_t>(team.task));
    if (team.full()) {
      res.completed.push_back(std::move(team));
      it = open_teams.erase(it);
    } else if (task.deadline <= now) {
      res.expired.push_back(std::move(team));
      it = open_teams.erase(it);
    } else {
      ++it;
    }
  }
  return res;
}

/// Periodic task source. Each announcement tick gets its own derived stream,
/// so the batch drawn at tick t depends only on (seed, t).
struct TaskGenerator {
  std::uint64_t stream_seed = 0;
  std::uint32_t n_skills = 1;
  std::uint32_t task_size = 1;
  std::uint32_t batch_size = 1;
  Tick timeout = 1;
  TaskId next_id = 0;

  std::vector<Task> announce(Tick tick) {
    Rng rng(derive_seed(stream_seed, "announce", tick));
    std::vector<Task> out;
    out.reserve(batch_size);
    for (std::uint32_t b = 0; b < batch_size; ++b) {
      Task t;
      t.id = next_id++;
      t.announced_at = tick;
      t.deadline = tick + timeout;
      t.required.reserve(task_size);
      for (std::uint32_t s = 0; s < task_size; ++s)
        t.required.push_back(static_cast<Skill>(1 + rng.uniform_below(n_skills)));
      out.push_back(std::move(t));
    }
    return out;
  }
};

enum class AdaptResult { no_neighbors, not_triggered, no_referral, rewire };

struct AdaptOutcome {
  AdaptResult result = AdaptResult::no_neighbors;
  AgentId remove = 0;  // meaningful for AdaptResult::rewire
  AgentId add = 0;
};

/// One agent's full adaptation exchange: query-if fan-out to its neighbors,
/// inform-if replies, trigger evaluation, and on trigger a proxy request to
/// the best neighbor answered with a referral. Returns a rewire instruction
/// only when a referral exists; the removal and the new link are decided
/// together so the agent never sheds a neighbor without gaining one.
/// Emits every message through `emit` in deterministic order.
/// Caller guarantees the agent is uncommitted with a valid tracker.
template <typename EmitMsg>
AdaptOutcome adaptation_exchange(AgentId self, const Graph& g, std::span<const Agent> agents, EmitMsg&& emit) {
  const auto& nbrs = g.neighbors(self);
  if (nbrs.empty()) return {AdaptResult::no_neighbors, 0, 0};

  for (AgentId j : nbrs)
    emit(Message{Performative::queryif, Actor::agent(self), Actor::agent(j), {}, {}, {}, {}});

  std::vector<NeighborPerf> perfs;
  std::vector<double> values;
  perfs.reserve(nbrs.size());
  values.reserve(nbrs.size());
  for (AgentId j : nbrs) {
    const double y = agents[j].perf.reported();
    perfs.push_back({j, y});
    values.push_back(y);
    emit(Message{Performative::informif, Actor::agent(j), Actor::agent(self), {}, y, {}, {}});
  }

  if (!should_adapt(agents[self].perf, values)) return {AdaptResult::not_triggered, 0, 0};

  const AgentId referrer = select_referrer(perfs);
  emit(Message{Performative::proxy, Actor::agent(self), Actor::agent(referrer), {}, {}, {}, {}});

  std::vector<NeighborPerf> referrer_perfs;
  const auto& referrer_nbrs = g.neighbors(referrer);
  referrer_perfs.reserve(referrer_nbrs.size());
  for (AgentId j : referrer_nbrs) referrer_perfs.push_back({j, agents[j].perf.reported()});

  const auto referral = select_referral(referrer_perfs, self, nbrs);
  emit(Message{Performative::referralreply, Actor::agent(referrer), Actor::agent(self), {}, {}, referral, {}});
  if (!referral) return {AdaptResult::no_referral, 0, 0};

  return {AdaptResult::rewire, select_removal(perfs), *referral};
}

}  // namespace teamnet
