#include "machlab/config.hpp"

#include <cmath>
#include <set>
#include <sstream>

namespace machlab {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split_list(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::istringstream in(s);
  std::string item;
  while (std::getline(in, item, sep)) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

// Accepts plain numbers, "inf", and multiples of pi such as "16pi" or "pi".
double parse_real(const std::string& s, int line, const std::string& key) {
  std::string v = trim(s);
  if (v == "inf" || v == "infinity") return std::numeric_limits<double>::infinity();
  double factor = 1.0;
  if (v.size() >= 2 && v.compare(v.size() - 2, 2, "pi") == 0) {
    factor = M_PI;
    v = v.substr(0, v.size() - 2);
    if (v.empty()) return factor;
    if (!v.empty() && v.back() == '*') v.pop_back();
  }
  try {
    size_t used = 0;
    const double x = std::stod(v, &used);
    if (used != v.size() || std::isnan(x)) throw std::invalid_argument("trailing");
    return x * factor;
  } catch (const std::exception&) {
    throw ConfigError(line, key + ": expected a number, got '" + s + "'");
  }
}

long parse_int(const std::string& s, int line, const std::string& key) {
  try {
    size_t used = 0;
    const long x = std::stol(trim(s), &used);
    if (used != trim(s).size()) throw std::invalid_argument("trailing");
    return x;
  } catch (const std::exception&) {
    throw ConfigError(line, key + ": expected an integer, got '" + s + "'");
  }
}

bool power_of_two(long n) { return n > 0 && (n & (n - 1)) == 0; }

}  // namespace

double default_T(const std::string& experiment) {
  if (experiment == "incompressible-limit") return 1.0;
  if (experiment == "transport-log") return 1.0;
  if (experiment == "lifespan-table") return 4.0;
  return 0.5;
}

// Keeps the eps=0.2 member's vorticity drift inside 5% over T=1.
double default_amplitude(const std::string& experiment) {
  return experiment == "incompressible-limit" ? 0.8 : 1.0;
}

ExperimentConfig parse_config(const std::string& text) {
  ExperimentConfig cfg;
  cfg.source = text;
  std::set<std::string> seen;
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  bool have_T = false;
  bool have_amplitude = false;
  while (std::getline(in, raw)) {
    ++lineno;
    const auto hash = raw.find('#');
    const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(lineno, "expected key=value");
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (!seen.insert(key).second) throw ConfigError(lineno, "duplicate key '" + key + "'");
    if (val.empty()) throw ConfigError(lineno, key + ": empty value");

    auto real = [&](double lo, double hi, bool lo_open, bool hi_open, const char* range) {
      const double x = parse_real(val, lineno, key);
      const bool ok = (lo_open ? x > lo : x >= lo) && (hi_open ? x < hi : x <= hi);
      if (!ok) throw ConfigError(lineno, key + " must be in " + range);
      return x;
    };

    if (key == "experiment") {
      bool known = false;
      for (const auto& n : experiment_names()) known = known || n == val;
      if (!known) {
        std::string list;
        for (const auto& n : experiment_names()) list += (list.empty() ? "" : ", ") + n;
        throw ConfigError(lineno, "unknown experiment '" + val + "' (allowed: " + list + ")");
      }
      cfg.experiment = val;
    } else if (key == "n") {
      const long n = parse_int(val, lineno, key);
      if (n < 8 || !power_of_two(n) || n > 8192) {
        throw ConfigError(lineno, "n must be a power of two in [8, 8192]");
      }
      cfg.n = static_cast<int>(n);
    } else if (key == "L") {
      cfg.length = real(0.0, 1e6, true, false, "(0,1e6]");
    } else if (key == "eps") {
      cfg.eps.clear();
      for (const auto& item : split_list(val, ',')) {
        const double e = parse_real(item, lineno, key);
        if (!(e > 0.0 && e <= 1.0)) throw ConfigError(lineno, "eps must be in (0,1]");
        cfg.eps.push_back(e);
      }
      if (cfg.eps.empty()) throw ConfigError(lineno, "eps: empty list");
    } else if (key == "T") {
      cfg.T = real(0.0, 1e4, true, false, "(0,1e4]");
      have_T = true;
    } else if (key == "gamma") {
      cfg.gamma = real(1.0, 10.0, true, false, "(1,10]");
    } else if (key == "data") {
      cfg.data = val;
    } else if (key == "amplitude") {
      cfg.amplitude = real(0.0, 1e3, false, false, "[0,1e3]");
      have_amplitude = true;
    } else if (key == "acoustic") {
      cfg.acoustic = real(0.0, 1e3, false, false, "[0,1e3]");
    } else if (key == "width") {
      cfg.width = real(0.0, 1e3, true, false, "(0,1e3]");
    } else if (key == "seed") {
      const long s = parse_int(val, lineno, key);
      if (s < 0) throw ConfigError(lineno, "seed must be nonnegative");
      cfg.seed = static_cast<std::uint64_t>(s);
    } else if (key == "profile") {
      cfg.profile = val;
    } else if (key == "comparison_profile") {
      cfg.comparison_profile = val;
    } else if (key == "out") {
      cfg.out = val;
    } else if (key == "snapshot_stride") {
      const long s = parse_int(val, lineno, key);
      if (s < 0) throw ConfigError(lineno, "snapshot_stride must be nonnegative");
      cfg.snapshot_stride = static_cast<int>(s);
    } else if (key == "cfl") {
      cfg.cfl = real(0.0, 1.0, true, true, "(0,1)");
    } else if (key == "max_dt") {
      cfg.max_dt = real(0.0, 10.0, true, false, "(0,10]");
    } else if (key == "blowup_grad") {
      cfg.blowup_grad = real(0.0, 1e300, true, false, "(0,1e300]");
    } else if (key == "blowup_besov") {
      cfg.blowup_besov = real(0.0, 1e300, true, false, "(0,1e300]");
    } else if (key == "p") {
      cfg.p = parse_real(val, lineno, key);
      if (!(cfg.p >= 2.0)) throw ConfigError(lineno, "p must be in [2,inf]");
    } else if (key == "samples") {
      const long s = parse_int(val, lineno, key);
      if (s < 64 || s > 100000) throw ConfigError(lineno, "samples must be in [64,100000]");
      cfg.samples = static_cast<int>(s);
    } else if (key == "velocities") {
      cfg.velocities = split_list(val, ',');
      if (cfg.velocities.size() < 2) {
        throw ConfigError(lineno, "velocities needs a calibration entry and at least one holdout");
      }
    } else if (key == "transport_n") {
      cfg.transport_n.clear();
      for (const auto& item : split_list(val, ',')) {
        const long n = parse_int(item, lineno, key);
        if (n < 8 || !power_of_two(n) || n > 8192) {
          throw ConfigError(lineno, "transport_n entries must be powers of two in [8, 8192]");
        }
        cfg.transport_n.push_back(static_cast<int>(n));
      }
    } else if (key == "transport_L") {
      cfg.transport_length = real(0.0, 1e6, true, false, "(0,1e6]");
    } else if (key == "transport_T") {
      cfg.transport_T = real(0.0, 1e3, true, false, "(0,1e3]");
    } else if (key == "margin") {
      cfg.margin = real(1.0, 1e6, false, false, "[1,1e6]");
    } else {
      throw ConfigError(lineno, "unknown key '" + key + "'");
    }
  }
  if (cfg.experiment.empty()) throw ConfigError(0, "missing required key 'experiment'");
  if (!have_T) cfg.T = default_T(cfg.experiment);
  if (!have_amplitude) cfg.amplitude = default_amplitude(cfg.experiment);
  return cfg;
}

}  // namespace machlab
