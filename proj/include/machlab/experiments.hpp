#pragma once

#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "machlab/config.hpp"

namespace machlab {

/// One PASS/FAIL line of a summary.
struct Assertion {
  std::string name;
  bool pass = false;
  std::string detail;
  std::string line() const;
};

struct ExperimentReport {
  std::string experiment;
  std::string config_hash;
  std::vector<Assertion> assertions;
  /// Informational lines (tables, fitted constants) written after the assertions.
  std::vector<std::string> notes;
  bool pass() const;
};

/// Runs body(0..count-1) on up to `threads` workers.  Each index is handled by
/// exactly one worker; the first exception is rethrown after all workers stop.
void parallel_for(int count, int threads, const std::function<void(int)>& body);

/// Thread count from --threads, else MACHLAB_THREADS, else 1.  Throws
/// ConfigError on a non-positive or malformed value.
int resolve_threads(int requested);

/// Checks names and ranges that only the experiment layer knows about
/// (initial data, profiles, velocities).  Throws ConfigError.
void validate_experiment(const ExperimentConfig& cfg);

/// Runs the configured experiment, writing ledgers, CSV tables and
/// summary.txt below `out`.  Blowups are reported as failed assertions except
/// in lifespan-table, where they are the measurement.
ExperimentReport run_experiment(const ExperimentConfig& cfg, const std::filesystem::path& out,
                                int threads);

void write_summary(const std::filesystem::path& path, const ExperimentReport& report);

// Individual experiments, also used by the acceptance suite.
ExperimentReport acoustic_decay_experiment(const ExperimentConfig& cfg,
                                           const std::filesystem::path& out, int threads);
ExperimentReport strichartz_sweep_experiment(const ExperimentConfig& cfg,
                                             const std::filesystem::path& out, int threads);
ExperimentReport incompressible_limit_experiment(const ExperimentConfig& cfg,
                                                 const std::filesystem::path& out, int threads);
ExperimentReport transport_log_experiment(const ExperimentConfig& cfg,
                                          const std::filesystem::path& out, int threads);
ExperimentReport lifespan_table_experiment(const ExperimentConfig& cfg,
                                           const std::filesystem::path& out, int threads);

}  // namespace machlab
