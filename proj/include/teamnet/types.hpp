#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>

namespace teamnet {

using AgentId = std::uint32_t;  // dense ids in [0, n)
using Skill = std::uint32_t;    // 1..n_skills
using TaskId = std::uint64_t;
using Tick = std::uint64_t;

// Bad run parameters. Carries the offending key so the CLI can name it (exit 2).
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key, const std::string& what)
      : std::runtime_error("config error [" + key + "]: " + what), key_(std::move(key)) {}
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

// Filesystem or stream failure (CLI exit 3).
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A broken internal invariant; always a bug, never user error (CLI exit 4).
class InvariantError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace teamnet
