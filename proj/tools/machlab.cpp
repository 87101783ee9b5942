#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "machlab/config.hpp"
#include "machlab/experiments.hpp"

namespace {

enum Exit { kPass = 0, kAssertion = 1, kConfig = 2, kRuntime = 3 };

std::string read_text(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw machlab::ConfigError(0, "cannot read config '" + path + "'");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"machlab: low-Mach pseudo-spectral experiments"};
  std::string experiment, config_path, out_dir;
  int threads = 0;
  app.add_option("experiment", experiment, "one of acoustic-decay, incompressible-limit, transport-log, "
                                           "strichartz-sweep, lifespan-table, selftest")
      ->required();
  app.add_option("--config", config_path, "key=value config file")->required();
  app.add_option("--out", out_dir, "output directory (overrides the config's out key)");
  app.add_option("--threads", threads, "worker threads (default: MACHLAB_THREADS, else 1)");
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfig;
  }

  machlab::ExperimentConfig cfg;
  int nthreads = 1;
  try {
    const auto& names = machlab::experiment_names();
    if (std::find(names.begin(), names.end(), experiment) == names.end()) {
      throw machlab::ConfigError(0, "unknown experiment '" + experiment + "'");
    }
    if (app.count("--threads") && threads < 1) throw machlab::ConfigError(0, "--threads must be positive");
    cfg = machlab::parse_config(read_text(config_path));
    if (cfg.experiment != experiment) {
      throw machlab::ConfigError(0, "config is for '" + cfg.experiment + "', not '" + experiment + "'");
    }
    machlab::validate_experiment(cfg);
    nthreads = machlab::resolve_threads(threads);
  } catch (const machlab::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  }

  if (out_dir.empty()) out_dir = cfg.out.empty() ? "out/" + experiment : cfg.out;
  try {
    const machlab::ExperimentReport rep = machlab::run_experiment(cfg, out_dir, nthreads);
    for (const auto& a : rep.assertions) std::cout << a.line() << '\n';
    std::cout << "result: " << (rep.pass() ? "PASS" : "FAIL") << " (" << out_dir << "/summary.txt)\n";
    return rep.pass() ? kPass : kAssertion;
  } catch (const machlab::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const std::exception& e) {
    std::cerr << "runtime error: " << e.what() << '\n';
    return kRuntime;
  }
}
