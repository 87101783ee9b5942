#include "machlab/operators.hpp"

#include <atomic>
#include <iostream>

namespace machlab {

namespace {

std::atomic<bool> warnings_on{true};

const cplx I{0.0, 1.0};

// Relative size of a zero mode that counts as a genuine nonzero mean.
constexpr double kMeanTolerance = 1e-13;

bool has_mean(const SpectralField& u) {
  const double mean = std::abs(u.modes(0, 0));
  const double scale = u.modes.abs().maxCoeff();
  return mean > kMeanTolerance * scale && mean > 0.0;
}

}  // namespace

void set_warnings_enabled(bool enabled) { warnings_on = enabled; }

void warn(const char* message) {
  if (warnings_on) std::clog << "machlab: warning: " << message << '\n';
}

SpectralField apply_multiplier(const SpectralField& u, const Eigen::ArrayXXd& m) {
  return {u.grid, u.modes * m, u.dealiased};
}

SpectralField partial_x(const SpectralField& u) {
  return {u.grid, I * (u.modes * u.grid.kx_deriv()), u.dealiased};
}

SpectralField partial_y(const SpectralField& u) {
  return {u.grid, I * (u.modes * u.grid.ky_deriv()), u.dealiased};
}

VectorField grad(const SpectralField& u) { return {partial_x(u), partial_y(u)}; }

SpectralField div(const VectorField& v) {
  const Grid& g = v.grid();
  return {g, I * (v.x.modes * g.kx_deriv() + v.y.modes * g.ky_deriv()), v.dealiased()};
}

SpectralField curl2d(const VectorField& v) {
  const Grid& g = v.grid();
  return {g, I * (v.y.modes * g.kx_deriv() - v.x.modes * g.ky_deriv()), v.dealiased()};
}

VectorField perp_grad(const SpectralField& u) { return {-partial_y(u), partial_x(u)}; }

SpectralField laplacian(const SpectralField& u) {
  return {u.grid, -(u.modes * u.grid.ksq()), u.dealiased};
}

SpectralField inv_laplacian(const SpectralField& u) {
  if (has_mean(u)) warn("inv_laplacian: input has nonzero mean; projecting to mean-free");
  SpectralField out{u.grid, Modes(u.modes.rows(), u.modes.cols()), u.dealiased};
  const Eigen::ArrayXXd& ksq = u.grid.ksq();
  for (Eigen::Index j = 0; j < out.modes.size(); ++j) {
    out.modes(j) = ksq(j) > 0.0 ? -u.modes(j) / ksq(j) : cplx{0.0, 0.0};
  }
  return out;
}

SpectralField inv_abs_d(const SpectralField& u) {
  SpectralField out{u.grid, Modes(u.modes.rows(), u.modes.cols()), u.dealiased};
  const Eigen::ArrayXXd& kabs = u.grid.kabs();
  for (Eigen::Index j = 0; j < out.modes.size(); ++j) {
    out.modes(j) = kabs(j) > 0.0 ? u.modes(j) / kabs(j) : cplx{0.0, 0.0};
  }
  return out;
}

VectorField leray_Q(const VectorField& v) {
  const Grid& g = v.grid();
  const Eigen::ArrayXXd& kx = g.kx_deriv();
  const Eigen::ArrayXXd& ky = g.ky_deriv();
  VectorField q{{g, Modes(g.n(), g.n()), v.x.dealiased}, {g, Modes(g.n(), g.n()), v.y.dealiased}};
  // Built from the derivative wavenumbers so that Q is an exact projector
  // on the Nyquist lines too.
  for (Eigen::Index j = 0; j < kx.size(); ++j) {
    const double ksq = kx(j) * kx(j) + ky(j) * ky(j);
    if (ksq > 0.0) {
      const cplx kv = (kx(j) * v.x.modes(j) + ky(j) * v.y.modes(j)) / ksq;
      q.x.modes(j) = kx(j) * kv;
      q.y.modes(j) = ky(j) * kv;
    } else {
      q.x.modes(j) = 0.0;
      q.y.modes(j) = 0.0;
    }
  }
  return q;
}

VectorField leray_P(const VectorField& v) { return v - leray_Q(v); }

}  // namespace machlab
