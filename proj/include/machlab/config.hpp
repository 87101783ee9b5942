#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace machlab {

class ConfigError : public std::runtime_error {
 public:
  ConfigError(int line, const std::string& message)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + message : message),
        line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

inline const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names = {"acoustic-decay",   "incompressible-limit",
                                                 "transport-log",    "strichartz-sweep",
                                                 "lifespan-table",   "selftest"};
  return names;
}

/// Flat key=value experiment description.  Keys not given keep the defaults
/// below; T, eps and amplitude get per-experiment defaults when absent.
struct ExperimentConfig {
  std::string experiment;
  int n = 256;
  double length = 16.0 * 3.14159265358979323846;
  std::vector<double> eps = {0.2, 0.1, 0.05, 0.025};
  double T = 0.5;
  double gamma = 1.4;
  std::string data = "taylor-green-ill";
  double amplitude = 1.0;
  double acoustic = 0.25;
  double width = 2.0;
  std::uint64_t seed = 1;
  std::string profile = "exp:1";
  std::string comparison_profile = "constant";
  std::string out;
  int snapshot_stride = 0;
  double cfl = 0.4;
  double max_dt = 0.01;
  double blowup_grad = 1e4;
  double blowup_besov = 1e8;
  double p = std::numeric_limits<double>::infinity();
  int samples = 128;
  std::vector<std::string> velocities = {"mono:0.5:1:1:3", "shear:1:1", "mono:0.3:2:1:5",
                                         "shear:0.6:1+mono:0.3:1:2:4", "shear:0.8:2"};
  std::vector<int> transport_n = {256, 512};
  double transport_length = 2.0 * 3.14159265358979323846;
  double transport_T = 1.0;
  double margin = 2.0;

  /// The original text, hashed into ledgers.
  std::string source;
};

/// Throws ConfigError carrying the 1-based line of the first problem (0 for
/// a missing key).
ExperimentConfig parse_config(const std::string& text);

/// Default end time of an experiment when T is not given.
double default_T(const std::string& experiment);
double default_amplitude(const std::string& experiment);

}  // namespace machlab
