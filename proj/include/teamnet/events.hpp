#pragma once

#include <filesystem>
#include <fstream>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

#include "teamnet/agent.hpp"
#include "teamnet/protocol.hpp"
#include "teamnet/text.hpp"
#include "teamnet/types.hpp"

namespace teamnet {

enum class EventKind { msg, state, rewire, task };

struct MsgEvent {
  Message msg;
};

struct StateEvent {
  AgentId agent;
  Phase from;
  Phase to;
  TaskId task;
};

// applied=false records an adaptation that triggered but found no referral.
struct RewireEvent {
  AgentId agent;
  bool applied;
  AgentId removed = 0;
  AgentId added = 0;
};

enum class TaskEventKind { announced, succeeded, failed, connectivity_drift };

struct TaskEvent {
  TaskEventKind what;
  TaskId task;
  std::vector<Skill> skills{};  // announced only
  Tick deadline = 0;            // announced only
};

// Variant order mirrors EventKind.
struct Event {
  Tick tick;
  std::variant<MsgEvent, StateEvent, RewireEvent, TaskEvent> body;

  EventKind kind() const { return static_cast<EventKind>(body.index()); }
};

class EventSink {
 public:
  virtual ~EventSink() = default;
  // Emitters skip building events of kinds the sink does not want.
  virtual bool wants(EventKind) const { return true; }
  virtual void on_event(const Event&) = 0;
};

class NullEventSink final : public EventSink {
 public:
  bool wants(EventKind) const override { return false; }
  void on_event(const Event&) override {}
};

class CollectingEventSink final : public EventSink {
 public:
  CollectingEventSink() : mask_{true, true, true, true} {}
  explicit CollectingEventSink(std::initializer_list<EventKind> kinds) : mask_{} {
    for (EventKind k : kinds) mask_[static_cast<std::size_t>(k)] = true;
  }

  bool wants(EventKind k) const override { return mask_[static_cast<std::size_t>(k)]; }
  void on_event(const Event& e) override { events.push_back(e); }

  std::vector<Event> events;

 private:
  bool mask_[4];
};

namespace detail {

inline void append_actor(std::string& out, const Actor& a) {
  switch (a.kind) {
    case Actor::Kind::manager: out += "\"manager\""; return;
    case Actor::Kind::scheduler: out += "\"scheduler\""; return;
    case Actor::Kind::agent:
      out += '"';
      text::append_u64(out, a.id);
      out += '"';
      return;
  }
}

inline void append_msg(std::string& out, const MsgEvent& e) {
  out += "\"kind\":\"msg\",\"performative\":\"";
  out += performative_name(e.msg.performative);
  out += "\",\"from\":";
  append_actor(out, e.msg.from);
  out += ",\"to\":";
  append_actor(out, e.msg.to);
  if (e.msg.task) {
    out += ",\"task\":";
    text::append_u64(out, *e.msg.task);
  }
  if (e.msg.perf_value) {
    out += ",\"perf\":";
    text::append_double(out, *e.msg.perf_value);
  }
  if (e.msg.performative == Performative::referralreply) {
    out += ",\"referral\":";
    if (e.msg.referral)
      text::append_u64(out, *e.msg.referral);
    else
      out += "null";
  }
  if (e.msg.reason) {
    out += ",\"reason\":\"";
    out += reject_reason_name(*e.msg.reason);
    out += '"';
  }
}

inline void append_state(std::string& out, const StateEvent& e) {
  out += "\"kind\":\"state\",\"agent\":";
  text::append_u64(out, e.agent);
  out += ",\"from\":\"";
  out += phase_name(e.from);
  out += "\",\"to\":\"";
  out += phase_name(e.to);
  out += "\",\"task\":";
  text::append_u64(out, e.task);
}

inline void append_rewire(std::string& out, const RewireEvent& e) {
  out += "\"kind\":\"rewire\",\"agent\":";
  text::append_u64(out, e.agent);
  if (e.applied) {
    out += ",\"removed\":";
    text::append_u64(out, e.removed);
    out += ",\"added\":";
    text::append_u64(out, e.added);
  } else {
    out += ",\"aborted\":\"no_referral\"";
  }
}

inline void append_task(std::string& out, const TaskEvent& e) {
  out += "\"kind\":\"task\",\"event\":\"";
  switch (e.what) {
    case TaskEventKind::announced: out += "announced"; break;
    case TaskEventKind::succeeded: out += "succeeded"; break;
    case TaskEventKind::failed: out += "failed"; break;
    case TaskEventKind::connectivity_drift: out += "connectivity_drift"; break;
  }
  out += "\",\"task\":";
  text::append_u64(out, e.task);
  if (e.what == TaskEventKind::announced) {
    out += ",\"skills\":[";
    for (std::size_t i = 0; i < e.skills.size(); ++i) {
      if (i) out += ',';
      text::append_u64(out, e.skills[i]);
    }
    out += "],\"deadline\":";
    text::append_u64(out, e.deadline);
  }
}

}  // namespace detail

/// One-line JSON rendering, stable field order, no whitespace.
inline void append_event_json(std::string& out, const Event& e) {
  out += "{\"tick\":";
  text::append_u64(out, e.tick);
  out += ',';
  std::visit(
      [&out](const auto& body) {
        using T = std::decay_t<decltype(body)>;
        if constexpr (std::is_same_v<T, MsgEvent>)
          detail::append_msg(out, body);
        else if constexpr (std::is_same_v<T, StateEvent>)
          detail::append_state(out, body);
        else if constexpr (std::is_same_v<T, RewireEvent>)
          detail::append_rewire(out, body);
        else
          detail::append_task(out, body);
      },
      e.body);
  out += '}';
}

inline std::string event_json(const Event& e) {
  std::string s;
  append_event_json(s, e);
  return s;
}

/// Streams events as JSON Lines. Bit-exact for equal-seed runs.
class JsonlEventSink final : public EventSink {
 public:
  explicit JsonlEventSink(const std::filesystem::path& path)
      : file_(path, std::ios::out | std::ios::trunc | std::ios::binary), out_(&file_), path_(path.string()) {
    if (!file_.is_open()) throw IoError("cannot open event log '" + path_ + "'");
  }

  explicit JsonlEventSink(std::ostream& os) : out_(&os), path_("<stream>") {}

  void on_event(const Event& e) override {
    line_.clear();
    append_event_json(line_, e);
    line_ += '\n';
    out_->write(line_.data(), static_cast<std::streamsize>(line_.size()));
    if (!out_->good()) throw IoError("write failed on event log '" + path_ + "'");
  }

 private:
  std::ofstream file_;
  std::ostream* out_;
  std::string path_;
  std::string line_;
};

}  // namespace teamnet
