#pragma once

#include <filesystem>
#include <fstream>
#include <ostream>
#include <span>
#include <string>

#include "json.hpp"
#include "teamnet/config_json.hpp"
#include "teamnet/engine.hpp"
#include "teamnet/text.hpp"

namespace teamnet {

/// Undirected DOT snapshot with per-node skill/perf attributes.
inline void write_dot(std::ostream& os, const Graph& g, std::span<const Agent> agents) {
  std::string out = "graph society {\n";
  for (const Agent& a : agents) {
    out += "  ";
    text::append_u64(out, a.id);
    out += " [skill=";
    text::append_u64(out, a.skill);
    out += ", perf=\"";
    text::append_double(out, a.perf.reported());
    out += "\"];\n";
  }
  for (AgentId i = 0; i < g.node_count(); ++i) {
    for (AgentId j : g.neighbors(i)) {
      if (j <= i) continue;
      out += "  ";
      text::append_u64(out, i);
      out += " -- ";
      text::append_u64(out, j);
      out += ";\n";
    }
  }
  out += "}\n";
  os.write(out.data(), static_cast<std::streamsize>(out.size()));
}

/// GraphML snapshot carrying the same skill/perf node attributes.
inline void write_graphml(std::ostream& os, const Graph& g, std::span<const Agent> agents) {
  std::string out =
      "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n"
      "  <key id=\"skill\" for=\"node\" attr.name=\"skill\" attr.type=\"int\"/>\n"
      "  <key id=\"perf\" for=\"node\" attr.name=\"perf\" attr.type=\"double\"/>\n"
      "  <graph id=\"society\" edgedefault=\"undirected\">\n";
  for (const Agent& a : agents) {
    out += "    <node id=\"n";
    text::append_u64(out, a.id);
    out += "\"><data key=\"skill\">";
    text::append_u64(out, a.skill);
    out += "</data><data key=\"perf\">";
    text::append_double(out, a.perf.reported());
    out += "</data></node>\n";
  }
  for (AgentId i = 0; i < g.node_count(); ++i) {
    for (AgentId j : g.neighbors(i)) {
      if (j <= i) continue;
      out += "    <edge source=\"n";
      text::append_u64(out, i);
      out += "\" target=\"n";
      text::append_u64(out, j);
      out += "\"/>\n";
    }
  }
  out += "  </graph>\n</graphml>\n";
  os.write(out.data(), static_cast<std::streamsize>(out.size()));
}

/// Writes metrics.csv (one row per agent per sampling tick) plus a pair of
/// network snapshot files net_<tick>.dot / net_<tick>.graphml per sample.
class FileMetricsSink final : public MetricsSink {
 public:
  explicit FileMetricsSink(std::filesystem::path dir) : dir_(std::move(dir)) {
    csv_.open(dir_ / "metrics.csv", std::ios::out | std::ios::trunc | std::ios::binary);
    if (!csv_.is_open()) throw IoError("cannot open metrics.csv in '" + dir_.string() + "'");
    csv_ << "tick,agent,degree_centrality,betweenness,closeness,performance\n";
  }

  void on_sample(Tick tick, const Graph& g, std::span<const Agent> agents, const CentralityVector& deg,
                 const CentralityVector& btw, const CentralityVector& clo) override {
    std::string rows;
    for (const Agent& a : agents) {
      text::append_u64(rows, tick);
      rows += ',';
      text::append_u64(rows, a.id);
      rows += ',';
      text::append_double(rows, deg.values[a.id]);
      rows += ',';
      text::append_double(rows, btw.values[a.id]);
      rows += ',';
      text::append_double(rows, clo.values[a.id]);
      rows += ',';
      text::append_double(rows, a.perf.reported());
      rows += '\n';
    }
    csv_.write(rows.data(), static_cast<std::streamsize>(rows.size()));
    if (!csv_.good()) throw IoError("write failed on metrics.csv in '" + dir_.string() + "'");

    write_snapshot(tick, g, agents, ".dot", &write_dot);
    write_snapshot(tick, g, agents, ".graphml", &write_graphml);
  }

 private:
  using Writer = void (*)(std::ostream&, const Graph&, std::span<const Agent>);

  void write_snapshot(Tick tick, const Graph& g, std::span<const Agent> agents, const char* ext, Writer writer) {
    const std::filesystem::path path = dir_ / ("net_" + std::to_string(tick) + ext);
    std::ofstream os(path, std::ios::out | std::ios::trunc | std::ios::binary);
    if (!os.is_open()) throw IoError("cannot open snapshot '" + path.string() + "'");
    writer(os, g, agents);
    if (!os.good()) throw IoError("write failed on snapshot '" + path.string() + "'");
  }

  std::filesystem::path dir_;
  std::ofstream csv_;
};

inline nlohmann::ordered_json report_to_json(const SimConfig& cfg, const SimReport& r) {
  nlohmann::ordered_json j;
  j["config"] = config_to_json(cfg);
  j["tasks_announced"] = r.tasks_announced;
  j["tasks_succeeded"] = r.tasks_succeeded;
  j["tasks_failed"] = r.tasks_failed;
  j["tasks_open"] = r.tasks_open;
  const std::uint64_t resolved = r.tasks_succeeded + r.tasks_failed;
  j["success_rate_overall"] = resolved ? static_cast<double>(r.tasks_succeeded) / resolved : 0.0;
  j["success_rate_series"] = r.success_rate_series;
  j["rewires_performed"] = r.rewires_performed;
  j["rewires_aborted"] = r.rewires_aborted;
  nlohmann::ordered_json agents = nlohmann::ordered_json::array();
  for (const AgentSummary& a : r.agents) {
    nlohmann::ordered_json row;
    row["id"] = a.id;
    row["skill"] = a.skill;
    row["attempts"] = a.attempts;
    row["successes"] = a.successes;
    row["performance"] = a.performance;
    agents.push_back(std::move(row));
  }
  j["agents"] = std::move(agents);
  nlohmann::ordered_json edges = nlohmann::ordered_json::array();
  for (AgentId i = 0; i < r.final_graph.node_count(); ++i)
    for (AgentId v : r.final_graph.neighbors(i))
      if (i < v) edges.push_back(nlohmann::ordered_json::array({i, v}));
  j["final_graph"] = {{"n", r.final_graph.node_count()}, {"edges", std::move(edges)}};
  return j;
}

inline void write_report_json(const std::filesystem::path& path, const SimConfig& cfg, const SimReport& r) {
  std::ofstream os(path, std::ios::out | std::ios::trunc | std::ios::binary);
  if (!os.is_open()) throw IoError("cannot open report '" + path.string() + "'");
  os << report_to_json(cfg, r).dump(2) << "\n";
  if (!os.good()) throw IoError("write failed on report '" + path.string() + "'");
}

}  // namespace teamnet
