#include "machlab/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace machlab {

double fit_constant(const std::function<bool(double)>& holds) {
  if (holds(0.0)) return 0.0;
  double hi = 1.0;
  while (!holds(hi)) {
    hi *= 2.0;
    if (hi > 1e300) throw std::runtime_error("fit_constant: no admissible constant");
  }
  double lo = hi == 1.0 ? 0.0 : 0.5 * hi;
  for (int i = 0; i < 200 && hi - lo > 1e-14 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    (holds(mid) ? hi : lo) = mid;
  }
  return hi;
}

double fit_linear_constant(std::span<const double> lhs, std::span<const double> rhs) {
  if (lhs.size() != rhs.size()) throw std::invalid_argument("fit_linear_constant: size mismatch");
  double c = 0.0;
  for (size_t i = 0; i < lhs.size(); ++i) {
    if (lhs[i] == 0.0) continue;
    if (rhs[i] <= 0.0) throw std::runtime_error("fit_linear_constant: positive lhs with zero rhs");
    c = std::max(c, lhs[i] / rhs[i]);
  }
  return c;
}

InequalityReport calibrate_and_check(const std::string& name, const BoundCheck& calibration,
                                     std::span<const BoundCheck> holdouts, double margin) {
  InequalityReport rep;
  rep.name = name;
  rep.margin = margin;
  rep.fitted = fit_constant([&](double C) { return calibration(C) <= 1.0; });
  rep.applied = margin * rep.fitted;
  for (const auto& h : holdouts) rep.worst_ratio = std::max(rep.worst_ratio, h(rep.applied));
  rep.pass = rep.worst_ratio <= 1.0;
  return rep;
}

double worst_linear_ratio(std::span<const double> lhs, std::span<const double> rhs, double C) {
  if (lhs.size() != rhs.size()) throw std::invalid_argument("worst_linear_ratio: size mismatch");
  double worst = 0.0;
  for (size_t i = 0; i < lhs.size(); ++i) {
    if (lhs[i] == 0.0) continue;
    const double r = C * rhs[i];
    worst = std::max(worst, r > 0.0 ? lhs[i] / r : HUGE_VAL);
  }
  return worst;
}

std::string InequalityReport::line() const {
  char buf[512];
  std::snprintf(buf, sizeof buf, "%s %s fitted_C=%.6g margin=%.3g applied_C=%.6g worst_ratio=%.6g",
                pass ? "PASS" : "FAIL", name.c_str(), fitted, margin, applied, worst_ratio);
  return buf;
}

}  // namespace machlab
