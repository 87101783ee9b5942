#include "machlab/incompressible.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "machlab/littlewood_paley.hpp"
#include "machlab/norms.hpp"
#include "machlab/operators.hpp"

namespace machlab {

VectorField velocity_from_vorticity(const SpectralField& omega) {
  return perp_grad(inv_laplacian(omega));
}

SpectralField vorticity_rhs(const SpectralField& omega) {
  const Grid& g = omega.grid;
  const VectorField v = velocity_from_vorticity(omega);
  RealSamples u, w, wx, wy;
  fft_inverse_pair(v.x, v.y, u, w);
  fft_inverse_pair(partial_x(omega), partial_y(omega), wx, wy);
  SpectralField r = real_part(fft_forward(g, RealSamples(-(u * wx + w * wy))));
  dealias(r);
  return r;
}

IncompressibleState step_incompressible(const IncompressibleState& s, double dt) {
  const SpectralField& w = s.omega;
  const SpectralField k1 = vorticity_rhs(w);
  const SpectralField k2 = vorticity_rhs({w.grid, w.modes + 0.5 * dt * k1.modes, true});
  const SpectralField k3 = vorticity_rhs({w.grid, w.modes + 0.5 * dt * k2.modes, true});
  const SpectralField k4 = vorticity_rhs({w.grid, w.modes + dt * k3.modes, true});
  IncompressibleState out{w, s.time + dt};
  out.omega.modes += dt / 6.0 * (k1.modes + 2.0 * k2.modes + 2.0 * k3.modes + k4.modes);
  dealias(out.omega);
  if (!out.omega.modes.isFinite().all()) {
    throw std::runtime_error("incompressible solver produced a non-finite state");
  }
  return out;
}

double stable_dt(const IncompressibleState& s, const IncompressibleConfig& cfg) {
  const VectorField v = velocity_from_vorticity(s.omega);
  RealSamples u, w;
  fft_inverse_pair(v.x, v.y, u, w);
  const double vmax = (u.square() + w.square()).sqrt().maxCoeff();
  return std::min(cfg.max_dt, cfg.cfl * s.omega.grid.spacing() / (vmax + 1e-12));
}

std::vector<std::string> incompressible_columns() {
  return {"t", "omega_inf", "omega_l2", "energy_l2", "omega_b0_inf1", "grad_v_inf", "int_grad_v"};
}

IncompressibleState run_incompressible(const IncompressibleState& initial, double T,
                                       const IncompressibleConfig& cfg, RunLedger& ledger,
                                       const IncompressibleRunOptions& options) {
  if (!(T > 0.0)) throw std::invalid_argument("run_incompressible: T must be positive");
  if (!(cfg.cfl > 0.0 && cfg.cfl < 1.0) || !(cfg.max_dt > 0.0)) {
    throw std::invalid_argument("run_incompressible: bad stepper configuration");
  }
  ledger = RunLedger(incompressible_columns());
  Accumulator acc;
  const DyadicPartition& part = partition_for(initial.omega.grid);
  auto record = [&](const IncompressibleState& s) {
    const VectorField v = velocity_from_vorticity(s.omega);
    const SpectralField vc[2] = {v.x, v.y};
    const double grad_v = grad_sup_norm(v);
    const double row[] = {
        s.time,
        lp_norm(fft_inverse(s.omega), s.omega.grid.cell_area(), kInf),
        l2_norm_spectral(s.omega),
        l2_norm_spectral(vc),
        besov_from_shells(shell_norms(part, std::span<const SpectralField>(&s.omega, 1), kInf),
                          0.0, 1.0),
        grad_v,
        acc.add(s.time, grad_v)};
    ledger.append(row);
  };

  const double t_end = initial.time + T;
  std::vector<double> outputs;
  for (double t : options.output_times) {
    if (t > 0.0 && t <= T) outputs.push_back(initial.time + t);
  }
  std::sort(outputs.begin(), outputs.end());
  size_t next_out = 0;

  IncompressibleState s = initial;
  record(s);
  if (options.observer) options.observer(s);
  const int stride = std::max(1, options.diag_stride);
  long count = 0;
  while (s.time < t_end) {
    double dt = cfg.fixed_dt > 0.0 ? cfg.fixed_dt : stable_dt(s, cfg);
    double target = t_end;
    while (next_out < outputs.size() && outputs[next_out] <= s.time) ++next_out;
    if (next_out < outputs.size()) target = std::min(target, outputs[next_out]);
    bool hit = false;
    if (s.time + dt * (1.0 + 1e-9) >= target) {
      dt = target - s.time;
      hit = true;
    }
    s = step_incompressible(s, dt);
    if (hit) s.time = target;
    ++count;
    const bool last = s.time >= t_end;
    const bool at_output = next_out < outputs.size() && s.time == outputs[next_out];
    if (last || at_output || count % stride == 0) record(s);
    if (at_output) {
      if (options.observer) options.observer(s);
      ++next_out;
    }
  }
  return s;
}

}  // namespace machlab
