#include "machlab/norms.hpp"

#include <stdexcept>

#include "machlab/operators.hpp"

namespace machlab {

RealSamples magnitude(std::span<const SpectralField> components) {
  if (components.empty()) throw std::invalid_argument("magnitude: no components");
  RealSamples sq = RealSamples::Zero(components[0].grid.n(), components[0].grid.n());
  for (const auto& c : components) sq += fft_inverse_complex(c).abs2();
  return sq.sqrt();
}

double lp_norm(const SpectralField& u, double p) {
  // Modulus throughout: for real fields the imaginary part is round-off.
  return lp_norm(fft_inverse_complex(u), u.grid.cell_area(), p);
}

double lp_norm(std::span<const SpectralField> components, double p) {
  if (components.size() == 1) return lp_norm(components[0], p);
  return lp_norm(magnitude(components), components[0].grid.cell_area(), p);
}

double lp_norm(const VectorField& v, double p) {
  const SpectralField c[2] = {v.x, v.y};
  return lp_norm(std::span<const SpectralField>(c), p);
}

double l2_norm_spectral(std::span<const SpectralField> components) {
  double sum = 0.0;
  for (const auto& c : components) {
    for (Eigen::Index j = 0; j < c.modes.size(); ++j) sum += std::norm(c.modes(j));
  }
  return components.empty() ? 0.0 : components[0].grid.length() * std::sqrt(sum);
}

double l2_norm_spectral(const SpectralField& u) {
  return l2_norm_spectral(std::span<const SpectralField>(&u, 1));
}

double grad_sup_norm(const VectorField& v) {
  const SpectralField parts[4] = {partial_x(v.x), partial_y(v.x), partial_x(v.y), partial_y(v.y)};
  return lp_norm(magnitude(parts), v.grid().cell_area(), kInf);
}

double mixed_time_norm(std::span<const double> times, std::span<const double> values, double r) {
  if (times.empty() || times.size() != values.size()) {
    throw std::invalid_argument("mixed_time_norm: empty or mismatched series");
  }
  if (r < 1.0) throw std::invalid_argument("mixed_time_norm: exponent must be >= 1");
  for (size_t i = 1; i < times.size(); ++i) {
    if (times[i] < times[i - 1]) throw std::invalid_argument("mixed_time_norm: times decrease");
  }
  if (std::isinf(r)) {
    double m = 0.0;
    for (double v : values) m = std::max(m, std::abs(v));
    return m;
  }
  double sum = 0.0;
  for (size_t i = 1; i < times.size(); ++i) {
    const double a = std::pow(std::abs(values[i - 1]), r);
    const double b = std::pow(std::abs(values[i]), r);
    sum += 0.5 * (times[i] - times[i - 1]) * (a + b);
  }
  return r == 1.0 ? sum : std::pow(sum, 1.0 / r);
}

std::vector<double> cumulative_trapezoid(std::span<const double> times,
                                         std::span<const double> values) {
  std::vector<double> out(times.size(), 0.0);
  for (size_t i = 1; i < times.size(); ++i) {
    out[i] = out[i - 1] + 0.5 * (times[i] - times[i - 1]) * (values[i - 1] + values[i]);
  }
  return out;
}

}  // namespace machlab
