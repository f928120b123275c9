#pragma once

#include <charconv>
#include <cstdint>
#include <string>

namespace teamnet::text {

inline void append_u64(std::string& out, std::uint64_t v) {
  char buf[20];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  out.append(buf, res.ptr);
}

// Shortest round-trip representation; identical output for identical doubles.
inline void append_double(std::string& out, double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  out.append(buf, res.ptr);
}

inline std::string u64_str(std::uint64_t v) {
  std::string s;
  append_u64(s, v);
  return s;
}

inline std::string double_str(double v) {
  std::string s;
  append_double(s, v);
  return s;
}

}  // namespace teamnet::text
