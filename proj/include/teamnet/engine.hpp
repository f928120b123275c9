#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "teamnet/agent.hpp"
#include "teamnet/centrality.hpp"
#include "teamnet/events.hpp"
#include "teamnet/graph.hpp"
#include "teamnet/protocol.hpp"
#include "teamnet/rng.hpp"
#include "teamnet/types.hpp"

namespace teamnet {

/// Full run recipe. JSON key names match the field names one to one.
struct SimConfig {
  std::uint32_t n_agents = 0;
  std::uint32_t n_skills = 0;
  std::uint32_t task_size = 0;
  Tick announce_interval = 1;
  Tick task_timeout = 1;
  std::uint32_t validity_threshold = 10;
  std::uint32_t batch_size = 1;
  TopologyKind topology_kind = TopologyKind::random_gnm;
  std::uint64_t topology_param = 0;
  std::optional<std::uint64_t> topology_seed;  // derived from `seed` when absent
  bool adaptation_enabled = true;
  Tick total_ticks = 1;
  std::uint64_t seed = 0;
  Tick metrics_sample_every = 1;
  std::uint32_t success_window = 50;  // announced tasks per tumbling window

  // Throws ConfigError naming the offending key. `validate` accepts a config
  // iff `run_simulation` would not reject it at startup.
  void validate() const {
    if (n_agents < 1) throw ConfigError("n_agents", "must be >= 1");
    if (n_skills < 1) throw ConfigError("n_skills", "must be >= 1");
    if (task_size < 1) throw ConfigError("task_size", "must be >= 1");
    if (announce_interval < 1) throw ConfigError("announce_interval", "must be >= 1");
    if (task_timeout < 1) throw ConfigError("task_timeout", "must be >= 1");
    if (batch_size < 1) throw ConfigError("batch_size", "must be >= 1");
    if (total_ticks < 1) throw ConfigError("total_ticks", "must be >= 1");
    if (metrics_sample_every < 1) throw ConfigError("metrics_sample_every", "must be >= 1");
    if (success_window < 1) throw ConfigError("success_window", "must be >= 1");
    // Topology feasibility mirrors what generate() enforces.
    const std::uint64_t n = n_agents;
    switch (topology_kind) {
      case TopologyKind::random_gnm:
        if (topology_param > n * (n - 1) / 2)
          throw ConfigError("topology.m", "edge count exceeds n(n-1)/2 for n_agents=" + std::to_string(n));
        break;
      case TopologyKind::ring_lattice:
        if (topology_param % 2 != 0) throw ConfigError("topology.k", "lattice degree must be even");
        if (topology_param >= n) throw ConfigError("topology.k", "lattice degree must be below n_agents");
        break;
      case TopologyKind::preferential_attachment:
        if (topology_param < 1 || topology_param >= n)
          throw ConfigError("topology.attach", "attachment count must be in [1, n_agents-1]");
        break;
    }
  }
};

inline TopologySpec resolved_topology(const SimConfig& cfg) {
  TopologySpec spec;
  spec.kind = cfg.topology_kind;
  spec.param = cfg.topology_param;
  spec.seed = cfg.topology_seed ? *cfg.topology_seed : derive_seed(cfg.seed, "topology");
  return spec;
}

/// Deterministic skill assignment from the run's "skills" substream.
inline std::vector<Skill> assign_skills(const SimConfig& cfg) {
  Rng rng(derive_seed(cfg.seed, "skills"));
  std::vector<Skill> skills(cfg.n_agents);
  for (auto& s : skills) s = static_cast<Skill>(1 + rng.uniform_below(cfg.n_skills));
  return skills;
}

struct AgentSummary {
  AgentId id;
  Skill skill;
  std::uint64_t attempts;
  std::uint64_t successes;
  double performance;  // reported value; 0 when the agent never attempted
};

struct SimReport {
  std::uint64_t tasks_announced = 0;
  std::uint64_t tasks_succeeded = 0;
  std::uint64_t tasks_failed = 0;
  std::uint64_t tasks_open = 0;  // still open when the run ended
  std::vector<double> success_rate_series;
  std::uint64_t rewires_performed = 0;
  std::uint64_t rewires_aborted = 0;
  std::vector<AgentSummary> agents;
  Graph final_graph;
};

/// Receives one sample per sampling tick: the live graph, agents, and the
/// three centrality vectors computed on that snapshot.
class MetricsSink {
 public:
  virtual ~MetricsSink() = default;
  virtual void on_sample(Tick tick, const Graph& g, std::span<const Agent> agents, const CentralityVector& deg,
                         const CentralityVector& btw, const CentralityVector& clo) = 0;
};

struct AdaptationPhaseStats {
  std::uint64_t applied = 0;
  std::uint64_t aborted = 0;
};

/// One Adapt phase: uncommitted agents with valid trackers run their
/// exchange in ascending id order, each seeing the graph as already mutated
/// by earlier agents this phase. Rewires apply immediately. Open teams are
/// re-checked after every applied rewire; a team found disconnected is
/// flagged with a connectivity_drift event but never dissolved.
inline AdaptationPhaseStats run_adaptation_phase(Tick tick, Graph& g, std::span<Agent> agents,
                                                 const std::map<TaskId, Team>& open_teams, EventSink& events) {
  AdaptationPhaseStats stats;
  const bool log_msgs = events.wants(EventKind::msg);
  auto emit_msg = [&](Message&& m) {
    if (log_msgs) events.on_event(Event{tick, MsgEvent{std::move(m)}});
  };

  for (Agent& agent : agents) {
    if (agent.state.phase != Phase::uncommitted || !agent.perf.valid()) continue;
    const AdaptOutcome outcome = adaptation_exchange(agent.id, g, agents, emit_msg);
    switch (outcome.result) {
      case AdaptResult::no_neighbors:
      case AdaptResult::not_triggered:
        break;
      case AdaptResult::no_referral:
        ++stats.aborted;
        if (events.wants(EventKind::rewire))
          events.on_event(Event{tick, RewireEvent{agent.id, false, 0, 0}});
        break;
      case AdaptResult::rewire: {
        if (!g.rewire(agent.id, outcome.remove, outcome.add))
          throw InvariantError("tick " + std::to_string(tick) + " phase adapt: rewire(" +
                               std::to_string(agent.id) + ") violated its preconditions");
        ++stats.applied;
        if (events.wants(EventKind::rewire))
          events.on_event(Event{tick, RewireEvent{agent.id, true, outcome.remove, outcome.add}});
        for (const auto& [task_id, team] : open_teams) {
          if (team.members.size() >= 2 && !is_team_connected(g, team.members)) {
            if (events.wants(EventKind::task))
              events.on_event(Event{tick, TaskEvent{TaskEventKind::connectivity_drift, task_id}});
          }
        }
        break;
      }
    }
  }
  return stats;
}

namespace detail {

enum class TaskOutcome : std::uint8_t { open, succeeded, failed };

class Simulation {
 public:
  Simulation(const SimConfig& cfg, EventSink& events, MetricsSink* metrics)
      : cfg_(cfg),
        events_(events),
        metrics_(metrics),
        graph_(generate(cfg.n_agents, resolved_topology(cfg))),
        skills_(assign_skills(cfg)) {
    task_gen_ = TaskGenerator{derive_seed(cfg.seed, "tasks"), cfg.n_skills, cfg.task_size,
                              cfg.batch_size,                 cfg.task_timeout, 0};
    agents_.reserve(cfg.n_agents);
    for (AgentId i = 0; i < cfg.n_agents; ++i)
      agents_.push_back(Agent{i, skills_[i], AgentState{}, PerformanceTracker{0, 0, cfg.validity_threshold}});
    initial_edges_ = graph_.edge_count();
  }

  SimReport run() {
    for (tick_ = 0; tick_ < cfg_.total_ticks; ++tick_) {
      if (tick_ % cfg_.announce_interval == 0) phase_announce();
      phase_propose();
      phase_schedule();
      phase_resolve();
      // Agents adapt between announcement rounds, once per round, so the
      // scheduler consults the post-adaptation graph from the next round on.
      if (cfg_.adaptation_enabled && (tick_ + 1) % cfg_.announce_interval == 0) phase_adapt();
      check_tick_invariants();
      if (metrics_ && tick_ % cfg_.metrics_sample_every == 0) sample(tick_);
    }
    // Closing sample of the post-run state.
    if (metrics_ && cfg_.total_ticks % cfg_.metrics_sample_every == 0) sample(cfg_.total_ticks);
    return build_report();
  }

 private:
  void phase_announce() {
    for (Task& t : task_gen_.announce(tick_)) {
      if (events_.wants(EventKind::task))
        events_.on_event(Event{tick_, TaskEvent{TaskEventKind::announced, t.id, t.required, t.deadline}});
      open_teams_.emplace(t.id, make_team(t));
      outcomes_.push_back(TaskOutcome::open);
      tasks_.push_back(std::move(t));
      ++announced_;
    }
  }

  // Every uncommitted agent applies to the lowest-id open task that still has
  // an unfilled slot for its skill; at most one application per agent per tick.
  void phase_propose() {
    proposals_.clear();
    for (Agent& agent : agents_) {
      if (agent.state.phase != Phase::uncommitted) continue;
      for (const auto& [task_id, team] : open_teams_) {
        if (!team.open_slot(agent.skill)) continue;
        proposals_.push_back(Proposal{task_id, agent.id, agent.skill});
        if (events_.wants(EventKind::msg))
          events_.on_event(Event{tick_, MsgEvent{Message{Performative::propose, Actor::agent(agent.id),
                                                         Actor::scheduler(), task_id, {}, {}, {}}}});
        transition(agent, Phase::committed, task_id);
        break;
      }
    }
  }

  void phase_schedule() {
    RoundResult result = scheduler_round(graph_, skills_, open_teams_, std::move(proposals_));
    proposals_.clear();
    if (!result.dropped.empty())
      throw InvariantError("tick " + std::to_string(tick_) + " phase schedule: malformed proposal");
    for (const Decision& d : result.decisions) {
      Agent& agent = agents_[d.proposal.agent];
      if (d.accepted) {
        if (events_.wants(EventKind::msg))
          events_.on_event(Event{tick_, MsgEvent{Message{Performative::acceptproposal, Actor::scheduler(),
                                                         Actor::agent(agent.id), d.proposal.task, {}, {}, {}}}});
        transition(agent, Phase::active, d.proposal.task);
        agent.perf.record(true);
      } else {
        if (events_.wants(EventKind::msg))
          events_.on_event(Event{tick_, MsgEvent{Message{Performative::rejectproposal, Actor::scheduler(),
                                                         Actor::agent(agent.id), d.proposal.task, {}, {},
                                                         d.reason}}});
        transition(agent, Phase::uncommitted, d.proposal.task);
        agent.perf.record(false);
      }
    }
  }

  void phase_resolve() {
    const Resolution res = scheduler_tick(tick_, tasks_, open_teams_);
    for (const Team& team : res.completed) close_team(team, true);
    for (const Team& team : res.expired) close_team(team, false);
  }

  void close_team(const Team& team, bool success) {
    const Performative p = success ? Performative::confirm : Performative::failure;
    for (AgentId m : team.members) {
      if (events_.wants(EventKind::msg))
        events_.on_event(Event{tick_, MsgEvent{Message{p, Actor::scheduler(), Actor::agent(m), team.task,
                                                       {}, {}, {}}}});
      transition(agents_[m], Phase::uncommitted, team.task);
    }
    outcomes_[static_cast<std::size_t>(team.task)] = success ? TaskOutcome::succeeded : TaskOutcome::failed;
    if (success)
      ++succeeded_;
    else
      ++failed_;
    if (events_.wants(EventKind::task))
      events_.on_event(Event{tick_, TaskEvent{success ? TaskEventKind::succeeded : TaskEventKind::failed,
                                              team.task}});
  }

  void phase_adapt() {
    const AdaptationPhaseStats stats = run_adaptation_phase(tick_, graph_, agents_, open_teams_, events_);
    rewires_ += stats.applied;
    aborted_ += stats.aborted;
  }

  void check_tick_invariants() {
    std::size_t active = 0;
    for (const Agent& a : agents_) {
      if (a.state.phase == Phase::committed)
        throw InvariantError("tick " + std::to_string(tick_) + ": agent " + std::to_string(a.id) +
                             " still committed after schedule");
      if (a.state.phase == Phase::active) ++active;
    }
    std::size_t members = 0;
    for (const auto& [id, team] : open_teams_) members += team.members.size();
    if (active != members)
      throw InvariantError("tick " + std::to_string(tick_) + ": active agents (" + std::to_string(active) +
                           ") != open team members (" + std::to_string(members) + ")");
    graph_.check_invariants();
    if (graph_.edge_count() != initial_edges_)
      throw InvariantError("tick " + std::to_string(tick_) + ": edge count drifted from " +
                           std::to_string(initial_edges_) + " to " + std::to_string(graph_.edge_count()));
    if (succeeded_ + failed_ > announced_)
      throw InvariantError("tick " + std::to_string(tick_) + ": resolved more tasks than announced");
  }

  void sample(Tick t) {
    const CentralityVector deg = degree_centrality(graph_);
    const CentralityVector btw = betweenness(graph_);
    const CentralityVector clo = closeness(graph_);
    metrics_->on_sample(t, graph_, agents_, deg, btw, clo);
  }

  void transition(Agent& agent, Phase to, TaskId task) {
    const Phase from = agent.state.phase;
    apply_transition(agent, to, task);
    if (events_.wants(EventKind::state))
      events_.on_event(Event{tick_, StateEvent{agent.id, from, to, task}});
  }

  SimReport build_report() {
    SimReport r;
    r.tasks_announced = announced_;
    r.tasks_succeeded = succeeded_;
    r.tasks_failed = failed_;
    r.tasks_open = announced_ - succeeded_ - failed_;
    r.rewires_performed = rewires_;
    r.rewires_aborted = aborted_;
    const std::uint64_t window = cfg_.success_window;
    for (std::uint64_t start = 0; start < outcomes_.size(); start += window) {
      const std::uint64_t end = std::min<std::uint64_t>(start + window, outcomes_.size());
      std::uint64_t succ = 0, fail = 0;
      for (std::uint64_t i = start; i < end; ++i) {
        if (outcomes_[i] == TaskOutcome::succeeded) ++succ;
        if (outcomes_[i] == TaskOutcome::failed) ++fail;
      }
      if (succ + fail > 0) r.success_rate_series.push_back(static_cast<double>(succ) / (succ + fail));
    }
    r.agents.reserve(agents_.size());
    for (const Agent& a : agents_)
      r.agents.push_back(AgentSummary{a.id, a.skill, a.perf.attempts, a.perf.successes, a.perf.reported()});
    r.final_graph = graph_;
    return r;
  }

  SimConfig cfg_;
  EventSink& events_;
  MetricsSink* metrics_;
  Graph graph_;
  std::vector<Skill> skills_;
  std::vector<Agent> agents_;
  TaskGenerator task_gen_;
  std::vector<Task> tasks_;  // indexed by task id
  std::map<TaskId, Team> open_teams_;
  std::vector<TaskOutcome> outcomes_;  // indexed by task id
  std::vector<Proposal> proposals_;
  Tick tick_ = 0;
  std::size_t initial_edges_ = 0;
  std::uint64_t announced_ = 0;
  std::uint64_t succeeded_ = 0;
  std::uint64_t failed_ = 0;
  std::uint64_t rewires_ = 0;
  std::uint64_t aborted_ = 0;
};

}  // namespace detail

/// Execute the full phase loop (announce, propose, schedule, resolve, adapt,
/// sample) for total_ticks ticks. Identical configs produce byte-identical
/// event streams. Throws InvariantError naming tick and phase if any internal
/// invariant breaks.
inline SimReport run_simulation(const SimConfig& cfg, EventSink& events, MetricsSink* metrics = nullptr) {
  cfg.validate();
  detail::Simulation sim(cfg, events, metrics);
  return sim.run();
}

}  // namespace teamnet
