#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "json.hpp"
#include "teamnet/artifacts.hpp"
#include "teamnet/config_json.hpp"
#include "teamnet/runner.hpp"

using namespace teamnet;
namespace fs = std::filesystem;

namespace {

nlohmann::json good_config_json() {
  return nlohmann::json::parse(R"({
    "n_agents": 12, "n_skills": 3, "task_size": 2,
    "announce_interval": 3, "task_timeout": 9,
    "validity_threshold": 5, "batch_size": 1,
    "topology": {"kind": "random_gnm", "m": 18},
    "adaptation_enabled": true, "total_ticks": 120,
    "seed": 11, "metrics_sample_every": 60
  })");
}

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("teamnet_test_" + name);
  fs::remove_all(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.is_open());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void check_key(nlohmann::json j, const std::string& mutate_key, const nlohmann::json& value,
               const std::string& expected_key) {
  if (mutate_key == "topology.m")
    j["topology"]["m"] = value;
  else if (mutate_key == "topology.k")
    j["topology"] = {{"kind", "ring_lattice"}, {"k", value}};
  else if (mutate_key == "topology.attach")
    j["topology"] = {{"kind", "preferential_attachment"}, {"attach", value}};
  else
    j[mutate_key] = value;
  try {
    config_from_json(j);
    FAIL("expected ConfigError for key " << expected_key);
  } catch (const ConfigError& e) {
    CHECK(e.key() == expected_key);
  }
}

}  // namespace

TEST_CASE("config parses and round-trips through JSON") {
  const SimConfig cfg = config_from_json(good_config_json());
  CHECK(cfg.n_agents == 12);
  CHECK(cfg.topology_kind == TopologyKind::random_gnm);
  CHECK(cfg.topology_param == 18);
  CHECK_FALSE(cfg.topology_seed.has_value());
  CHECK(cfg.success_window == 50);

  const SimConfig back = config_from_json(config_to_json(cfg));
  CHECK(back.n_agents == cfg.n_agents);
  CHECK(back.seed == cfg.seed);
  CHECK(back.topology_param == cfg.topology_param);
  CHECK(back.success_window == cfg.success_window);
}

TEST_CASE("config rejections name the offending key") {
  check_key(good_config_json(), "n_agents", 0, "n_agents");
  check_key(good_config_json(), "n_skills", 0, "n_skills");
  check_key(good_config_json(), "task_size", 0, "task_size");
  check_key(good_config_json(), "announce_interval", 0, "announce_interval");
  check_key(good_config_json(), "task_timeout", 0, "task_timeout");
  check_key(good_config_json(), "batch_size", 0, "batch_size");
  check_key(good_config_json(), "total_ticks", 0, "total_ticks");
  check_key(good_config_json(), "metrics_sample_every", 0, "metrics_sample_every");
  check_key(good_config_json(), "seed", -4, "seed");
  check_key(good_config_json(), "n_agents", true, "n_agents");
  check_key(good_config_json(), "n_agents", 1.5, "n_agents");
  check_key(good_config_json(), "topology.m", 999, "topology.m");
  check_key(good_config_json(), "topology.k", 3, "topology.k");
  check_key(good_config_json(), "topology.attach", 0, "topology.attach");

  auto unknown = good_config_json();
  unknown["typo_key"] = 1;
  CHECK_THROWS_WITH_AS(config_from_json(unknown), doctest::Contains("typo_key"), ConfigError);

  auto missing = good_config_json();
  missing.erase("seed");
  CHECK_THROWS_WITH_AS(config_from_json(missing), doctest::Contains("seed"), ConfigError);

  auto bad_kind = good_config_json();
  bad_kind["topology"]["kind"] = "smallworld";
  CHECK_THROWS_WITH_AS(config_from_json(bad_kind), doctest::Contains("topology.kind"), ConfigError);

  auto stray_param = good_config_json();
  stray_param["topology"]["k"] = 2;
  CHECK_THROWS_WITH_AS(config_from_json(stray_param), doctest::Contains("topology.k"), ConfigError);
}

TEST_CASE("validate mirrors run startup checks") {
  const SimConfig cfg = config_from_json(good_config_json());
  CHECK_NOTHROW(cfg.validate());
  SimConfig bad = cfg;
  bad.announce_interval = 0;
  CHECK_THROWS_WITH_AS(bad.validate(), doctest::Contains("announce_interval"), ConfigError);
}

TEST_CASE("run_to_directory writes the full artifact tree deterministically") {
  const SimConfig cfg = config_from_json(good_config_json());
  const fs::path dir_a = fresh_dir("run_a");
  const fs::path dir_b = fresh_dir("run_b");
  const SimReport report = run_to_directory(cfg, dir_a);
  run_to_directory(cfg, dir_b);

  for (const char* name : {"events.jsonl", "metrics.csv", "report.json", "net_0.dot", "net_0.graphml",
                           "net_60.dot", "net_120.dot"}) {
    CHECK(fs::exists(dir_a / name));
  }
  for (const char* name : {"events.jsonl", "metrics.csv", "report.json", "net_0.dot", "net_120.graphml"})
    CHECK(slurp(dir_a / name) == slurp(dir_b / name));

  const auto parsed = nlohmann::json::parse(slurp(dir_a / "report.json"));
  CHECK(parsed.at("tasks_announced").get<std::uint64_t>() == report.tasks_announced);
  CHECK(parsed.at("agents").size() == cfg.n_agents);
  CHECK(parsed.at("final_graph").at("edges").size() == 18);

  // metrics.csv: header plus one row per agent per sample (ticks 0, 60, 120)
  const std::string csv = slurp(dir_a / "metrics.csv");
  CHECK(csv.rfind("tick,agent,degree_centrality,betweenness,closeness,performance\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + 3 * 12);

  fs::remove_all(dir_a);
  fs::remove_all(dir_b);
}

TEST_CASE("snapshot exporters carry skill and perf attributes") {
  Graph g(2);
  g.add_edge(0, 1);
  std::vector<Agent> agents{Agent{0, 2, {}, PerformanceTracker{4, 2, 10}}, Agent{1, 1, {}, {}}};

  std::ostringstream dot;
  write_dot(dot, g, agents);
  CHECK(dot.str() == "graph society {\n  0 [skill=2, perf=\"0.5\"];\n  1 [skill=1, perf=\"0\"];\n"
                     "  0 -- 1;\n}\n");

  std::ostringstream gml;
  write_graphml(gml, g, agents);
  const std::string xml = gml.str();
  CHECK(xml.find("<node id=\"n0\"><data key=\"skill\">2</data><data key=\"perf\">0.5</data></node>") !=
        std::string::npos);
  CHECK(xml.find("<edge source=\"n0\" target=\"n1\"/>") != std::string::npos);
  CHECK(xml.find("edgedefault=\"undirected\"") != std::string::npos);
}

TEST_CASE("sweep runs one directory per seed and a summary") {
  SimConfig cfg = config_from_json(good_config_json());
  cfg.total_ticks = 60;
  const fs::path dir = fresh_dir("sweep");
  const std::uint64_t seeds[] = {1, 2, 3};
  const auto rows = run_sweep(cfg, seeds, dir, 2);

  REQUIRE(rows.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(rows[i].seed == seeds[i]);
    CHECK(fs::exists(dir / ("seed_" + std::to_string(seeds[i])) / "report.json"));
  }
  const std::string summary = slurp(dir / "summary.csv");
  CHECK(summary.rfind("seed,success_rate,rewires\n", 0) == 0);
  CHECK(std::count(summary.begin(), summary.end(), '\n') == 4);
  fs::remove_all(dir);
}

TEST_CASE("compare pairs arms by seed with delta = on - off") {
  SimConfig cfg = config_from_json(good_config_json());
  cfg.total_ticks = 60;
  const fs::path dir = fresh_dir("compare");
  const std::uint64_t seeds[] = {4, 9};
  const auto rows = run_compare(cfg, seeds, dir, 1);

  REQUIRE(rows.size() == 2);
  for (const auto& row : rows) {
    CHECK(row.delta == row.rate_on - row.rate_off);
    CHECK(fs::exists(dir / ("seed_" + std::to_string(row.seed)) / "on" / "report.json"));
    CHECK(fs::exists(dir / ("seed_" + std::to_string(row.seed)) / "off" / "report.json"));
  }
  const std::string csv = slurp(dir / "compare.csv");
  CHECK(csv.rfind("seed,rate_on,rate_off,delta\n", 0) == 0);
  fs::remove_all(dir);
}

TEST_CASE("compare arms share the task stream, so differences come from adaptation") {
  SimConfig on = config_from_json(good_config_json());
  on.total_ticks = 90;
  SimConfig off = on;
  off.adaptation_enabled = false;

  CollectingEventSink sink_on({EventKind::task});
  CollectingEventSink sink_off({EventKind::task});
  run_simulation(on, sink_on);
  run_simulation(off, sink_off);

  std::vector<std::vector<Skill>> tasks_on, tasks_off;
  for (const Event& e : sink_on.events) {
    const auto& te = std::get<TaskEvent>(e.body);
    if (te.what == TaskEventKind::announced) tasks_on.push_back(te.skills);
  }
  for (const Event& e : sink_off.events) {
    const auto& te = std::get<TaskEvent>(e.body);
    if (te.what == TaskEventKind::announced) tasks_off.push_back(te.skills);
  }
  REQUIRE(!tasks_on.empty());
  CHECK(tasks_on == tasks_off);

  // Same seed, same initial topology in both arms.
  CHECK(generate(on.n_agents, resolved_topology(on)) == generate(off.n_agents, resolved_topology(off)));
}

TEST_CASE("an explicit topology.seed pins the network across run seeds") {
  auto j = good_config_json();
  j["topology"]["seed"] = 77;
  SimConfig a = config_from_json(j);
  SimConfig b = a;
  b.seed = a.seed + 5;
  CHECK(generate(a.n_agents, resolved_topology(a)) == generate(b.n_agents, resolved_topology(b)));

  // Without it, the topology follows the run seed.
  SimConfig c = config_from_json(good_config_json());
  SimConfig d = c;
  d.seed = c.seed + 5;
  CHECK(generate(c.n_agents, resolved_topology(c)) != generate(d.n_agents, resolved_topology(d)));
}

TEST_CASE("overall_success_rate handles the no-resolved-tasks edge") {
  SimReport r;
  CHECK(overall_success_rate(r) == 0.0);
  r.tasks_succeeded = 3;
  r.tasks_failed = 1;
  CHECK(overall_success_rate(r) == 0.75);
}

TEST_CASE("load_config maps missing files to IoError and bad JSON to ConfigError") {
  CHECK_THROWS_AS(load_config("/nonexistent/teamnet.json"), IoError);
  const fs::path dir = fresh_dir("badjson");
  fs::create_directories(dir);
  std::ofstream(dir / "broken.json") << "{ not json";
  CHECK_THROWS_AS(load_config(dir / "broken.json"), ConfigError);
  fs::remove_all(dir);
}
