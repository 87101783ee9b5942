#pragma once

#include <cmath>
#include <random>

#include "machlab/field.hpp"

namespace machlab::testing {

// Random real field with modes only below the dealias cutoff.
inline SpectralField random_field(const Grid& g, std::uint64_t seed, bool mean_free = false) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  RealSamples s(g.n(), g.n());
  for (Eigen::Index j = 0; j < s.size(); ++j) s(j) = normal(rng);
  SpectralField u = real_part(fft_forward(g, s));
  dealias(u);
  if (mean_free) u.modes(0, 0) = 0.0;
  return u;
}

inline VectorField random_vector(const Grid& g, std::uint64_t seed) {
  return {random_field(g, seed), random_field(g, seed + 7919)};
}

// Samples f(x, y) on the grid.
template <typename F>
RealSamples sample(const Grid& g, F f) {
  const Eigen::ArrayXd x = g.coordinates();
  RealSamples s(g.n(), g.n());
  for (int jy = 0; jy < g.n(); ++jy)
    for (int jx = 0; jx < g.n(); ++jx) s(jx, jy) = f(x(jx), x(jy));
  return s;
}

inline double max_abs(const Modes& m) { return m.abs().maxCoeff(); }

inline double rel_diff(const SpectralField& a, const SpectralField& b) {
  const double scale = std::max(max_abs(a.modes), max_abs(b.modes));
  return scale == 0.0 ? 0.0 : max_abs(a.modes - b.modes) / scale;
}

}  // namespace machlab::testing
