#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "qdarwin/experiment.hpp"

namespace h = qdarwin::harness;

namespace {

enum Exit { kOk = 0, kConfig = 2, kNoConvergence = 3, kInvariant = 4 };

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw qdarwin::Error(qdarwin::ErrorCode::ConfigInvalid, "cannot read config '" + path + "'");
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"iterated S-E collision simulator and partial-information plots"};
  std::string config_path, scenario, out, format;
  int threads = 0;
  std::uint64_t seed = 0;
  bool list = false;
  app.add_option("--config", config_path, "config file (key: value)")->check(CLI::ExistingFile);
  app.add_option("--scenario", scenario, "scenario name; overrides the config");
  app.add_option("--out", out, "output directory");
  app.add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  auto* t_opt = app.add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);
  auto* s_opt = app.add_option("--seed", seed, "seed for random trace orderings");
  app.add_flag("--list", list, "print the scenario catalog");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfig;
  }

  if (list) {
    for (const auto& s : h::scenario_catalog()) std::cout << s << '\n';
    return kOk;
  }

  h::ExperimentConfig cfg;
  try {
    if (config_path.empty() && scenario.empty())
      throw qdarwin::Error(qdarwin::ErrorCode::ConfigInvalid, "need --config or --scenario");
    cfg = h::validate_config(config_path.empty() ? std::string() : slurp(config_path), scenario);
    if (!out.empty()) cfg.out = out;
    if (!format.empty()) cfg.format = format == "json" ? h::Format::Json : h::Format::Csv;
    if (*t_opt) cfg.threads = threads;
    if (*s_opt) cfg.seed = seed;
    h::check_config(cfg);
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  }

  try {
    const h::RunManifest m = h::run_scenario(cfg);
    for (const auto& o : m.outputs) std::cout << o.sha256 << "  " << o.path << '\n';
    std::fprintf(stderr, "%s: %.2f s\n", cfg.scenario.c_str(), m.wall_seconds);
    if (!m.converged) {
      for (const auto& n : m.notes) std::cerr << n << '\n';
      return kNoConvergence;
    }
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "output error: " << e.what() << '\n';
    return kConfig;
  } catch (const std::exception& e) {
    std::cerr << "invariant violation: " << e.what() << '\n';
    return kInvariant;
  }
  return kOk;
}
