#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <limits>
#include <string>

#include "json.hpp"
#include "teamnet/engine.hpp"
#include "teamnet/types.hpp"

namespace teamnet {

namespace detail {

// `name` is the key as reported in errors (may carry a "topology." prefix).
inline std::uint64_t get_uint(const nlohmann::json& j, const std::string& key, std::uint64_t max_value,
                              const std::string& name) {
  if (!j.contains(key)) throw ConfigError(name, "missing");
  const auto& v = j.at(key);
  const bool non_negative_integer =
      v.is_number_unsigned() || (v.is_number_integer() && v.get<std::int64_t>() >= 0);
  if (!non_negative_integer) throw ConfigError(name, "must be a non-negative integer");
  const std::uint64_t u = v.get<std::uint64_t>();
  if (u > max_value) throw ConfigError(name, "exceeds maximum " + std::to_string(max_value));
  return u;
}

inline std::uint64_t get_uint(const nlohmann::json& j, const std::string& key, std::uint64_t max_value) {
  return get_uint(j, key, max_value, key);
}

inline const char* topology_param_key(TopologyKind kind) {
  switch (kind) {
    case TopologyKind::random_gnm: return "m";
    case TopologyKind::ring_lattice: return "k";
    case TopologyKind::preferential_attachment: return "attach";
  }
  return "?";
}

}  // namespace detail

/// Strict parse: every key required (except topology.seed and
/// success_window), unknown keys rejected so typos never silently fall back
/// to defaults. Throws ConfigError naming the offending key.
inline SimConfig config_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("config", "top level must be a JSON object");

  static const char* known[] = {"n_agents",           "n_skills",    "task_size", "announce_interval",
                                "task_timeout",       "validity_threshold",       "batch_size",
                                "topology",           "adaptation_enabled",       "total_ticks",
                                "seed",               "metrics_sample_every",     "success_window"};
  for (const auto& item : j.items()) {
    bool ok = false;
    for (const char* k : known)
      if (item.key() == k) ok = true;
    if (!ok) throw ConfigError(item.key(), "unknown key");
  }

  constexpr std::uint64_t u32max = std::numeric_limits<std::uint32_t>::max();
  constexpr std::uint64_t u64max = std::numeric_limits<std::uint64_t>::max();

  SimConfig cfg;
  cfg.n_agents = static_cast<std::uint32_t>(detail::get_uint(j, "n_agents", u32max));
  cfg.n_skills = static_cast<std::uint32_t>(detail::get_uint(j, "n_skills", u32max));
  cfg.task_size = static_cast<std::uint32_t>(detail::get_uint(j, "task_size", u32max));
  cfg.announce_interval = detail::get_uint(j, "announce_interval", u64max);
  cfg.task_timeout = detail::get_uint(j, "task_timeout", u64max);
  cfg.validity_threshold = static_cast<std::uint32_t>(detail::get_uint(j, "validity_threshold", u32max));
  cfg.batch_size = static_cast<std::uint32_t>(detail::get_uint(j, "batch_size", u32max));
  cfg.total_ticks = detail::get_uint(j, "total_ticks", u64max);
  cfg.seed = detail::get_uint(j, "seed", u64max);
  cfg.metrics_sample_every = detail::get_uint(j, "metrics_sample_every", u64max);
  if (j.contains("success_window"))
    cfg.success_window = static_cast<std::uint32_t>(detail::get_uint(j, "success_window", u32max));

  if (!j.contains("adaptation_enabled")) throw ConfigError("adaptation_enabled", "missing");
  if (!j.at("adaptation_enabled").is_boolean()) throw ConfigError("adaptation_enabled", "must be a boolean");
  cfg.adaptation_enabled = j.at("adaptation_enabled").get<bool>();

  if (!j.contains("topology")) throw ConfigError("topology", "missing");
  const auto& topo = j.at("topology");
  if (!topo.is_object()) throw ConfigError("topology", "must be an object");
  if (!topo.contains("kind")) throw ConfigError("topology.kind", "missing");
  if (!topo.at("kind").is_string()) throw ConfigError("topology.kind", "must be a string");
  cfg.topology_kind = topology_kind_from_name(topo.at("kind").get<std::string>());
  const std::string param_key = detail::topology_param_key(cfg.topology_kind);
  for (const auto& item : topo.items()) {
    if (item.key() != "kind" && item.key() != "seed" && item.key() != param_key)
      throw ConfigError("topology." + item.key(),
                        "not valid for kind " + std::string(topology_kind_name(cfg.topology_kind)));
  }
  cfg.topology_param = detail::get_uint(topo, param_key, u64max, "topology." + param_key);
  if (topo.contains("seed")) cfg.topology_seed = detail::get_uint(topo, "seed", u64max, "topology.seed");

  cfg.validate();
  return cfg;
}

inline nlohmann::ordered_json config_to_json(const SimConfig& cfg) {
  nlohmann::ordered_json topo;
  topo["kind"] = std::string(topology_kind_name(cfg.topology_kind));
  topo[detail::topology_param_key(cfg.topology_kind)] = cfg.topology_param;
  if (cfg.topology_seed) topo["seed"] = *cfg.topology_seed;

  nlohmann::ordered_json j;
  j["n_agents"] = cfg.n_agents;
  j["n_skills"] = cfg.n_skills;
  j["task_size"] = cfg.task_size;
  j["announce_interval"] = cfg.announce_interval;
  j["task_timeout"] = cfg.task_timeout;
  j["validity_threshold"] = cfg.validity_threshold;
  j["batch_size"] = cfg.batch_size;
  j["topology"] = std::move(topo);
  j["adaptation_enabled"] = cfg.adaptation_enabled;
  j["total_ticks"] = cfg.total_ticks;
  j["seed"] = cfg.seed;
  j["metrics_sample_every"] = cfg.metrics_sample_every;
  j["success_window"] = cfg.success_window;
  return j;
}

inline SimConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in.is_open()) throw IoError("cannot open config file '" + path.string() + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("config", "not valid JSON: " + std::string(e.what()));
  }
  return config_from_json(j);
}

}  // namespace teamnet
