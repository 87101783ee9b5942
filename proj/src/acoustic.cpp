#include "machlab/acoustic.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

#include "machlab/norms.hpp"
#include "machlab/operators.hpp"

namespace machlab {

void validate_state(const FlowState& s) {
  if (!(s.eps > 0.0 && s.eps <= 1.0)) throw std::invalid_argument("eps must be in (0,1]");
  if (!(s.gamma_bar > 0.0)) throw std::invalid_argument("gamma_bar must be positive");
  if (!(s.v.x.grid == s.c.grid) || !(s.v.y.grid == s.c.grid)) {
    throw std::invalid_argument("flow state components live on different grids");
  }
}

AcousticPair make_acoustic(const FlowState& state) {
  const Grid& g = state.grid();
  const Eigen::ArrayXXd& kx = g.kx_deriv();
  const Eigen::ArrayXXd& ky = g.ky_deriv();
  AcousticPair pair{leray_Q(state.v), SpectralField::zeros(g), state.eps};
  pair.upsilon.dealiased = state.v.dealiased() && state.c.dealiased;
  const cplx I{0.0, 1.0};
  for (Eigen::Index j = 0; j < kx.size(); ++j) {
    const double k = std::hypot(kx(j), ky(j));
    if (k == 0.0) continue;
    const cplx c = state.c.modes(j);
    pair.gamma.x.modes(j) += kx(j) / k * c;
    pair.gamma.y.modes(j) += ky(j) / k * c;
    pair.upsilon.modes(j) =
        I * (kx(j) * state.v.x.modes(j) + ky(j) * state.v.y.modes(j)) / k + I * c;
  }
  return pair;
}

VectorField acoustic_velocity(const AcousticPair& pair) {
  return {real_part(pair.gamma.x), real_part(pair.gamma.y)};
}

SpectralField acoustic_sound_speed(const AcousticPair& pair) { return imag_part(pair.upsilon); }

SpectralField free_propagate(const SpectralField& psi, double t, double eps) {
  if (t == 0.0) return psi;
  const Eigen::ArrayXXd& kabs = psi.grid.kabs();
  SpectralField out = psi;
  for (Eigen::Index j = 0; j < kabs.size(); ++j) {
    const double theta = t * kabs(j) / eps;
    out.modes(j) *= cplx{std::cos(theta), -std::sin(theta)};
  }
  return out;
}

VectorField free_propagate(const VectorField& psi, double t, double eps) {
  return {free_propagate(psi.x, t, eps), free_propagate(psi.y, t, eps)};
}

StrichartzExponents strichartz_exponents(double p) {
  if (!(p >= 2.0)) throw std::invalid_argument("strichartz_exponents: p must be >= 2");
  if (std::isinf(p)) return {4.0, 0.25};
  if (p == 2.0) return {kInf, 0.0};
  return {4.0 + 8.0 / (p - 2.0), 0.25 - 0.5 / p};
}

double wraparound_time(const Grid& grid, double eps) { return 0.45 * grid.length() * eps; }

StrichartzMeasurement measure_strichartz(std::span<const SpectralField> initial, double eps,
                                         double T, double p, int samples) {
  if (!(T > 0.0)) throw std::invalid_argument("measure_strichartz: empty time window");
  if (samples < 64) throw std::invalid_argument("measure_strichartz: need at least 64 samples");
  if (initial.empty()) throw std::invalid_argument("measure_strichartz: no components");
  const auto ex = strichartz_exponents(p);
  std::vector<double> times(static_cast<size_t>(samples));
  std::vector<double> values(times.size());
  std::vector<SpectralField> comp(initial.begin(), initial.end());
  for (size_t i = 0; i < times.size(); ++i) {
    times[i] = T * static_cast<double>(i) / static_cast<double>(samples - 1);
    for (size_t c = 0; c < comp.size(); ++c) comp[c] = free_propagate(initial[c], times[i], eps);
    values[i] = lp_norm(std::span<const SpectralField>(comp), p);
  }
  StrichartzMeasurement m;
  m.eps = eps;
  m.T = T;
  m.p = p;
  m.r = ex.r;
  m.norm = mixed_time_norm(times, values, ex.r);
  m.scaled = m.norm / std::pow(eps, ex.decay);
  m.wraparound = T >= wraparound_time(initial[0].grid, eps);
  return m;
}

void write_strichartz_csv(std::ostream& out, std::span<const StrichartzMeasurement> rows) {
  out << "eps,T,p,r,norm,scaled,wraparound\n";
  char buf[256];
  for (const auto& m : rows) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%d\n", m.eps, m.T, m.p, m.r,
                  m.norm, m.scaled, m.wraparound ? 1 : 0);
    out << buf;
  }
}

}  // namespace machlab
