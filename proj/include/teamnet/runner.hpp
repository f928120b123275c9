#pragma once

#include <atomic>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <fstream>
#include <span>
#include <string>
#include <system_error>
#include <thread>
#include <vector>

#include "teamnet/artifacts.hpp"
#include "teamnet/config_json.hpp"
#include "teamnet/engine.hpp"
#include "teamnet/events.hpp"
#include "teamnet/text.hpp"

namespace teamnet {

inline double overall_success_rate(const SimReport& r) {
  const std::uint64_t resolved = r.tasks_succeeded + r.tasks_failed;
  return resolved ? static_cast<double>(r.tasks_succeeded) / resolved : 0.0;
}

/// One simulation into `out_dir`: events.jsonl, metrics.csv, net_<tick>
/// snapshots, report.json.
inline SimReport run_to_directory(const SimConfig& cfg, const std::filesystem::path& out_dir) {
  cfg.validate();
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create output directory '" + out_dir.string() + "': " + ec.message());

  JsonlEventSink events(out_dir / "events.jsonl");
  FileMetricsSink metrics(out_dir);
  SimReport report = run_simulation(cfg, events, &metrics);
  write_report_json(out_dir / "report.json", cfg, report);
  return report;
}

namespace detail {

// Runs fn(0..count-1) on up to `jobs` threads; rethrows the first failure.
template <typename Fn>
void parallel_indices(std::size_t count, unsigned jobs, Fn&& fn) {
  if (jobs <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(jobs, count));
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(count);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= count) return;
        try {
          fn(i);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
}

inline void write_text_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream os(path, std::ios::out | std::ios::trunc | std::ios::binary);
  if (!os.is_open()) throw IoError("cannot open '" + path.string() + "'");
  os.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!os.good()) throw IoError("write failed on '" + path.string() + "'");
}

}  // namespace detail

struct SweepRow {
  std::uint64_t seed;
  double success_rate;  // succeeded / resolved
  std::uint64_t rewires;
};

/// One run per seed under out/seed_<s>/, then summary.csv (row order follows
/// the seeds argument). Seeds may run in parallel; outputs are per-seed
/// isolated and the summary is written after all complete.
inline std::vector<SweepRow> run_sweep(SimConfig cfg, std::span<const std::uint64_t> seeds,
                                       const std::filesystem::path& out_dir, unsigned jobs = 1) {
  cfg.validate();
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create output directory '" + out_dir.string() + "': " + ec.message());

  std::vector<SweepRow> rows(seeds.size());
  detail::parallel_indices(seeds.size(), jobs, [&](std::size_t i) {
    SimConfig run_cfg = cfg;
    run_cfg.seed = seeds[i];
    const SimReport report = run_to_directory(run_cfg, out_dir / ("seed_" + std::to_string(seeds[i])));
    rows[i] = SweepRow{seeds[i], overall_success_rate(report), report.rewires_performed};
  });

  std::string csv = "seed,success_rate,rewires\n";
  for (const SweepRow& row : rows) {
    text::append_u64(csv, row.seed);
    csv += ',';
    text::append_double(csv, row.success_rate);
    csv += ',';
    text::append_u64(csv, row.rewires);
    csv += '\n';
  }
  detail::write_text_file(out_dir / "summary.csv", csv);
  return rows;
}

struct CompareRow {
  std::uint64_t seed;
  double rate_on;
  double rate_off;
  double delta;  // rate_on - rate_off
};

/// Paired adaptation-on/off runs per seed under out/seed_<s>/{on,off}, then
/// compare.csv. Both arms of a seed share the topology and task substreams,
/// so differences are attributable to adaptation alone.
inline std::vector<CompareRow> run_compare(SimConfig cfg, std::span<const std::uint64_t> seeds,
                                           const std::filesystem::path& out_dir, unsigned jobs = 1) {
  cfg.validate();
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create output directory '" + out_dir.string() + "': " + ec.message());

  std::vector<CompareRow> rows(seeds.size());
  detail::parallel_indices(seeds.size(), jobs, [&](std::size_t i) {
    const std::filesystem::path seed_dir = out_dir / ("seed_" + std::to_string(seeds[i]));
    SimConfig on_cfg = cfg;
    on_cfg.seed = seeds[i];
    on_cfg.adaptation_enabled = true;
    SimConfig off_cfg = on_cfg;
    off_cfg.adaptation_enabled = false;
    const double rate_on = overall_success_rate(run_to_directory(on_cfg, seed_dir / "on"));
    const double rate_off = overall_success_rate(run_to_directory(off_cfg, seed_dir / "off"));
    rows[i] = CompareRow{seeds[i], rate_on, rate_off, rate_on - rate_off};
  });

  std::string csv = "seed,rate_on,rate_off,delta\n";
  for (const CompareRow& row : rows) {
    text::append_u64(csv, row.seed);
    csv += ',';
    text::append_double(csv, row.rate_on);
    csv += ',';
    text::append_double(csv, row.rate_off);
    csv += ',';
    text::append_double(csv, row.delta);
    csv += '\n';
  }
  detail::write_text_file(out_dir / "compare.csv", csv);
  return rows;
}

}  // namespace teamnet
