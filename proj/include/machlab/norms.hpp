#pragma once

#include <cmath>
#include <limits>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "machlab/field.hpp"

namespace machlab {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Grid quadrature L^p norm of pointwise magnitudes: (cell_area * sum |u|^p)^(1/p),
/// or the grid max for p = inf.  Summation runs in storage order so the result
/// is reproducible bit for bit.
template <typename Derived>
double lp_norm(const Eigen::ArrayBase<Derived>& magnitude, double cell_area, double p) {
  const auto& a = magnitude.derived();
  if (std::isinf(p)) {
    double m = 0.0;
    for (Eigen::Index j = 0; j < a.size(); ++j) m = std::max(m, static_cast<double>(std::abs(a(j))));
    return m;
  }
  double sum = 0.0;
  if (p == 2.0) {
    for (Eigen::Index j = 0; j < a.size(); ++j) sum += std::norm(a(j));
    return std::sqrt(cell_area * sum);
  }
  for (Eigen::Index j = 0; j < a.size(); ++j) sum += std::pow(std::abs(a(j)), p);
  return std::pow(cell_area * sum, 1.0 / p);
}

/// Pointwise Euclidean magnitude of a set of components in real space.
RealSamples magnitude(std::span<const SpectralField> components);

double lp_norm(const SpectralField& u, double p);
double lp_norm(const VectorField& v, double p);
/// Norm of the pointwise Euclidean magnitude of several components, e.g. (v, c).
double lp_norm(std::span<const SpectralField> components, double p);

/// L^2 norm from the coefficients (Parseval), no transform needed.
double l2_norm_spectral(std::span<const SpectralField> components);
double l2_norm_spectral(const SpectralField& u);

/// Pointwise Frobenius magnitude of the velocity gradient, max over the grid.
double grad_sup_norm(const VectorField& v);

/// (int_0^T value(t)^r dt)^(1/r) by the trapezoidal rule; r = inf gives the sup.
/// Throws on an empty series or decreasing times.  A single sample spans a
/// zero-length interval and yields 0.
double mixed_time_norm(std::span<const double> times, std::span<const double> values, double r);

/// Running trapezoid integral of values over times (same length as input).
std::vector<double> cumulative_trapezoid(std::span<const double> times,
                                         std::span<const double> values);

}  // namespace machlab
