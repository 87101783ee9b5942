#pragma once

#include <functional>
#include <span>
#include <string>

namespace machlab {

/// Smallest C >= 0 for which holds(C) is true, assuming holds is monotone
/// (false below some threshold, true above).  The upper bracket is doubled
/// from 1 until it holds; bisection then runs a fixed number of steps so the
/// result is reproducible.  Throws std::runtime_error if no C <= 1e300 works.
double fit_constant(const std::function<bool(double)>& holds);

/// max_i lhs[i] / rhs[i] for bounds of the form lhs <= C * rhs, skipping
/// pairs with lhs == 0.  Throws when lhs > 0 meets rhs == 0.
double fit_linear_constant(std::span<const double> lhs, std::span<const double> rhs);

/// Outcome of checking one inequality with a fitted constant.
struct InequalityReport {
  std::string name;
  double fitted = 0.0;   // C from the calibration data
  double margin = 2.0;
  double applied = 0.0;  // fitted * margin, used on the holdout data
  double worst_ratio = 0.0;  // max lhs/rhs on holdout with the applied C
  bool pass = false;

  std::string line() const;
};

/// Worst lhs/rhs ratio of some data set when the bound uses constant C.
using BoundCheck = std::function<double(double C)>;

/// Calibration/holdout protocol: C is the smallest constant with ratio <= 1 on
/// the calibration data; every holdout set is then checked with margin * C.
InequalityReport calibrate_and_check(const std::string& name, const BoundCheck& calibration,
                                     std::span<const BoundCheck> holdouts, double margin = 2.0);

/// Ratio helper for bounds lhs <= C * rhs; zero lhs counts as ratio 0.
double worst_linear_ratio(std::span<const double> lhs, std::span<const double> rhs, double C);

}  // namespace machlab
