#include "machlab/profile.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "machlab/littlewood_paley.hpp"

namespace machlab {

double BesovProfile::at(double x) const {
  if (x < -1.0) x = -1.0;
  if (closed_form) return closed_form(x);
  const double pos = x + 1.0;
  const auto last = values.size() - 1;
  if (pos >= static_cast<double>(last)) return values[last];
  const auto i = static_cast<size_t>(std::floor(pos));
  const double w = pos - static_cast<double>(i);
  return w == 0.0 ? values[i] : (1.0 - w) * values[i] + w * values[i + 1];
}

BesovProfile validate_profile(std::vector<double> values, std::string name,
                              std::function<double(double)> closed_form) {
  if (values.empty()) throw std::invalid_argument("profile: no values");
  for (size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i]) || values[i] <= 0.0) {
      throw std::invalid_argument("profile: values must be positive and finite (q = " +
                                  std::to_string(static_cast<int>(i) - 1) + ")");
    }
    if (i > 0 && values[i] < values[i - 1]) {
      throw std::invalid_argument("profile: values must be nondecreasing (q = " +
                                  std::to_string(static_cast<int>(i) - 1) + ")");
    }
  }
  BesovProfile prof;
  prof.name = std::move(name);
  prof.closed_form = std::move(closed_form);
  prof.values = std::move(values);
  const auto& v = prof.values;
  for (size_t i = 1; i < v.size(); ++i) {
    prof.ratio_bound = std::max(prof.ratio_bound, v[i] / v[i - 1]);
    prof.growth_exponent =
        std::max(prof.growth_exponent, std::log(v[i] / v[0]) / static_cast<double>(i));
  }
  prof.diverges = v.back() > 10.0 * v.front();
  return prof;
}

BesovProfile make_named_profile(const std::string& spec, int q_last) {
  if (q_last < -1) throw std::invalid_argument("profile: q_last must be >= -1");
  std::function<double(double)> f;
  if (spec == "constant") {
    f = [](double) { return 1.0; };
  } else {
    const auto colon = spec.find(':');
    if (colon == std::string::npos) throw std::invalid_argument("profile: unknown name '" + spec + "'");
    const std::string kind = spec.substr(0, colon);
    const std::string arg = spec.substr(colon + 1);
    double a = 0.0;
    const auto res = std::from_chars(arg.data(), arg.data() + arg.size(), a);
    if (res.ec != std::errc() || res.ptr != arg.data() + arg.size() || !std::isfinite(a) || a < 0.0) {
      throw std::invalid_argument("profile: bad exponent in '" + spec + "'");
    }
    if (kind == "power") {
      f = [a](double x) { return std::pow(x + 2.0, a); };
    } else if (kind == "exp") {
      f = [a](double x) { return std::exp(a * x); };
    } else {
      throw std::invalid_argument("profile: unknown name '" + spec +
                                  "' (expected constant, power:a, exp:a)");
    }
  }
  std::vector<double> values;
  for (int q = -1; q <= q_last; ++q) values.push_back(f(q));
  return validate_profile(std::move(values), spec, std::move(f));
}

ProfileFit find_profile_from_shells(std::span<const double> a, double r) {
  if (a.empty()) throw std::invalid_argument("find_profile: empty shell sequence");
  if (!(r >= 1.0) || std::isinf(r)) throw std::invalid_argument("find_profile: r must be in [1, inf)");
  const size_t m = a.size();
  std::vector<double> tail(m + 1, 0.0);
  for (size_t i = m; i-- > 0;) tail[i] = tail[i + 1] + std::pow(a[i], r);

  ProfileFit fit;
  std::vector<double> psi(m, 1.0);
  if (tail[0] == 0.0) {
    fit.profile = validate_profile(psi, "found");
    fit.profile.degenerate = true;
    return fit;
  }
  for (size_t i = 1; i < m; ++i) {
    const double cand = tail[i] > 0.0 ? std::pow(tail[0] / tail[i], 0.5 / r) : std::numeric_limits<double>::infinity();
    psi[i] = std::max(psi[i - 1], std::min(cand, 2.0 * psi[i - 1]));
  }
  double plain = 0.0;
  double weighted = 0.0;
  for (size_t i = 0; i < m; ++i) {
    plain += std::pow(a[i], r);
    weighted += std::pow(psi[i] * a[i], r);
  }
  fit.profile = validate_profile(std::move(psi), "found");
  fit.plain_norm = std::pow(plain, 1.0 / r);
  fit.weighted_norm = std::pow(weighted, 1.0 / r);
  fit.normalization = fit.weighted_norm / fit.plain_norm;
  return fit;
}

namespace {

std::vector<double> weighted(std::vector<double> shells, double s) {
  for (size_t i = 0; i < shells.size(); ++i) {
    shells[i] *= std::pow(2.0, (static_cast<double>(i) - 1.0) * s);
  }
  return shells;
}

}  // namespace

ProfileFit find_profile(const DyadicPartition& part, std::span<const SpectralField> components,
                        double s, double p, double r) {
  return find_profile_from_shells(weighted(shell_norms(part, components, p), s), r);
}

ProfileFit find_profile(const SpectralField& u, double s, double p, double r) {
  return find_profile(partition_for(u.grid), std::span<const SpectralField>(&u, 1), s, p, r);
}

ProfileFit find_profile_family(const DyadicPartition& part,
                               std::span<const std::vector<SpectralField>> family, double s,
                               double p, double r) {
  std::vector<double> sup(static_cast<size_t>(part.shell_count()), 0.0);
  for (const auto& member : family) {
    const auto sh = shell_norms(part, member, p);
    for (size_t i = 0; i < sup.size(); ++i) sup[i] = std::max(sup[i], sh[i]);
  }
  return find_profile_from_shells(weighted(std::move(sup), s), r);
}

void write_profile(std::ostream& out, const BesovProfile& profile) {
  out << "# profile " << profile.name << " ratio_bound=" << profile.ratio_bound
      << " growth_exponent=" << profile.growth_exponent
      << " diverges=" << (profile.diverges ? 1 : 0) << '\n';
  const auto old = out.precision(17);
  for (size_t i = 0; i < profile.values.size(); ++i) {
    out << static_cast<int>(i) - 1 << ' ' << profile.values[i] << '\n';
  }
  out.precision(old);
}

BesovProfile read_profile(std::istream& in) {
  std::vector<double> values;
  std::string line;
  int expected = -1;
  while (std::getline(in, line)) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream ls(line);
    int q = 0;
    double v = 0.0;
    if (!(ls >> q >> v)) throw std::invalid_argument("profile: malformed line '" + line + "'");
    if (q != expected) throw std::invalid_argument("profile: expected q = " + std::to_string(expected));
    values.push_back(v);
    ++expected;
  }
  return validate_profile(std::move(values), "data");
}

}  // namespace machlab
