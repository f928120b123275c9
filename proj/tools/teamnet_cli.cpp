#include <cstdint>
#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "teamnet/teamnet.hpp"

namespace {

std::vector<std::uint64_t> parse_seeds(const std::string& s) {
  std::vector<std::uint64_t> seeds;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    const std::size_t comma = s.find(',', pos);
    const std::string part = s.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    if (part.empty()) throw teamnet::ConfigError("seeds", "empty entry in seed list '" + s + "'");
    try {
      std::size_t used = 0;
      const unsigned long long v = std::stoull(part, &used);
      if (used != part.size()) throw std::invalid_argument(part);
      seeds.push_back(v);
    } catch (const std::exception&) {
      throw teamnet::ConfigError("seeds", "'" + part + "' is not a non-negative integer");
    }
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  if (seeds.empty()) throw teamnet::ConfigError("seeds", "seed list is empty");
  return seeds;
}

void print_report_line(const teamnet::SimReport& r) {
  std::cout << "announced=" << r.tasks_announced << " succeeded=" << r.tasks_succeeded
            << " failed=" << r.tasks_failed << " open=" << r.tasks_open
            << " rewires=" << r.rewires_performed << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"deterministic simulator of task-team formation over an adaptive agent social network"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::string seeds_arg;
  unsigned jobs = 1;

  CLI::App* cmd_run = app.add_subcommand("run", "run one simulation and write its artifacts");
  cmd_run->add_option("--config", config_path, "config JSON file")->required();
  cmd_run->add_option("--out", out_dir, "output directory")->required();

  CLI::App* cmd_sweep = app.add_subcommand("sweep", "run one simulation per seed plus summary.csv");
  cmd_sweep->add_option("--config", config_path, "config JSON file")->required();
  cmd_sweep->add_option("--seeds", seeds_arg, "comma-separated seed list, e.g. 1,2,3")->required();
  cmd_sweep->add_option("--out", out_dir, "output directory")->required();
  cmd_sweep->add_option("--jobs", jobs, "max parallel runs");

  CLI::App* cmd_compare = app.add_subcommand("compare", "paired adaptation on/off sweep plus compare.csv");
  cmd_compare->add_option("--config", config_path, "config JSON file")->required();
  cmd_compare->add_option("--seeds", seeds_arg, "comma-separated seed list")->required();
  cmd_compare->add_option("--out", out_dir, "output directory")->required();
  cmd_compare->add_option("--jobs", jobs, "max parallel runs");

  CLI::App* cmd_validate = app.add_subcommand("validate", "check a config without running");
  cmd_validate->add_option("--config", config_path, "config JSON file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (cmd_validate->parsed()) {
      teamnet::load_config(config_path);
      std::cout << "config ok\n";
    } else if (cmd_run->parsed()) {
      const auto cfg = teamnet::load_config(config_path);
      const auto report = teamnet::run_to_directory(cfg, out_dir);
      print_report_line(report);
    } else if (cmd_sweep->parsed()) {
      const auto cfg = teamnet::load_config(config_path);
      const auto seeds = parse_seeds(seeds_arg);
      teamnet::run_sweep(cfg, seeds, out_dir, jobs);
      std::cout << "wrote " << out_dir << "/summary.csv (" << seeds.size() << " seeds)\n";
    } else if (cmd_compare->parsed()) {
      const auto cfg = teamnet::load_config(config_path);
      const auto seeds = parse_seeds(seeds_arg);
      teamnet::run_compare(cfg, seeds, out_dir, jobs);
      std::cout << "wrote " << out_dir << "/compare.csv (" << seeds.size() << " seeds)\n";
    }
  } catch (const teamnet::ConfigError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const teamnet::IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return 3;
  } catch (const teamnet::InvariantError& e) {
    std::cerr << "internal invariant violation: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
