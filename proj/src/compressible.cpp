#include "machlab/compressible.hpp"

#include <algorithm>
#include <cmath>

#include "machlab/littlewood_paley.hpp"
#include "machlab/norms.hpp"
#include "machlab/operators.hpp"

namespace machlab {

namespace {

constexpr double kTiny = 1e-12;

bool finite(const SpectralField& u) { return u.modes.isFinite().all(); }
bool finite(const FlowState& s) { return finite(s.v.x) && finite(s.v.y) && finite(s.c); }

FlowState axpy(const FlowState& s, double h, const NonlinearRhs& k) {
  FlowState out = s;
  out.v.x.modes += h * k.f.x.modes;
  out.v.y.modes += h * k.f.y.modes;
  out.c.modes += h * k.g.modes;
  return out;
}

NonlinearRhs evaluate(const FlowState& s, const StepperConfig& cfg) {
  NonlinearRhs r = rhs_nonlinear(s);
  if (cfg.project_nonlinear) {
    r.f = leray_P(r.f);
    r.g.modes.setZero();
  }
  return r;
}

FlowState rk4(const FlowState& s, const StepperConfig& cfg, double dt) {
  const NonlinearRhs k1 = evaluate(s, cfg);
  const NonlinearRhs k2 = evaluate(axpy(s, 0.5 * dt, k1), cfg);
  const NonlinearRhs k3 = evaluate(axpy(s, 0.5 * dt, k2), cfg);
  const NonlinearRhs k4 = evaluate(axpy(s, dt, k3), cfg);
  FlowState out = s;
  const double w = dt / 6.0;
  out.v.x.modes += w * (k1.f.x.modes + 2.0 * k2.f.x.modes + 2.0 * k3.f.x.modes + k4.f.x.modes);
  out.v.y.modes += w * (k1.f.y.modes + 2.0 * k2.f.y.modes + 2.0 * k3.f.y.modes + k4.f.y.modes);
  out.c.modes += w * (k1.g.modes + 2.0 * k2.g.modes + 2.0 * k3.g.modes + k4.g.modes);
  return out;
}

struct Diagnostics {
  double grad_v, grad_c, div_v, omega, l2, l2_v, b2, b2_psi, omega_b0, div_b0, div_b12_4, qv, c;
};

Diagnostics diagnose(const FlowState& s, const std::optional<BesovProfile>& profile) {
  const Grid& g = s.grid();
  RealSamples ux, uy, vx, vy, cx, cy;
  fft_inverse_pair(partial_x(s.v.x), partial_y(s.v.x), ux, uy);
  fft_inverse_pair(partial_x(s.v.y), partial_y(s.v.y), vx, vy);
  fft_inverse_pair(partial_x(s.c), partial_y(s.c), cx, cy);
  Diagnostics d{};
  d.grad_v = (ux.square() + uy.square() + vx.square() + vy.square()).sqrt().maxCoeff();
  d.grad_c = (cx.square() + cy.square()).sqrt().maxCoeff();
  d.div_v = (ux + vy).abs().maxCoeff();
  d.omega = (vx - uy).abs().maxCoeff();

  const SpectralField all[3] = {s.v.x, s.v.y, s.c};
  d.l2 = l2_norm_spectral(all);
  d.l2_v = l2_norm_spectral(std::span<const SpectralField>(all, 2));
  const DyadicPartition& part = partition_for(g);
  const auto shells2 = shell_norms(part, all, 2.0);
  d.b2 = besov_from_shells(shells2, 2.0, 1.0);
  if (profile) {
    std::vector<double> w;
    for (int q = -1; q <= part.q_max; ++q) w.push_back(profile->at(q));
    d.b2_psi = besov_from_shells(shells2, 2.0, 1.0, w);
  }
  const SpectralField om = curl2d(s.v);
  const SpectralField dv = div(s.v);
  d.omega_b0 = besov_from_shells(shell_norms(part, std::span<const SpectralField>(&om, 1), kInf),
                                 0.0, 1.0);
  const double ps[2] = {kInf, 4.0};
  const auto div_shells = shell_norms(part, std::span<const SpectralField>(&dv, 1), ps);
  d.div_b0 = besov_from_shells(div_shells[0], 0.0, 1.0);
  d.div_b12_4 = besov_from_shells(div_shells[1], 0.5, 1.0);

  const VectorField q = leray_Q(s.v);
  RealSamples qx, qy;
  fft_inverse_pair(q.x, q.y, qx, qy);
  d.qv = (qx.square() + qy.square()).sqrt().maxCoeff();
  d.c = fft_inverse(s.c).abs().maxCoeff();
  return d;
}

}  // namespace

void validate_config(const StepperConfig& cfg) {
  if (!(cfg.cfl > 0.0 && cfg.cfl < 1.0)) throw std::invalid_argument("cfl must be in (0,1)");
  if (!(cfg.max_dt > 0.0)) throw std::invalid_argument("max_dt must be positive");
  if (!(cfg.fixed_dt >= 0.0)) throw std::invalid_argument("fixed_dt must be nonnegative");
  if (!(cfg.blowup_grad > 0.0 && cfg.blowup_besov > 0.0)) {
    throw std::invalid_argument("blowup thresholds must be positive");
  }
}

NonlinearRhs rhs_nonlinear(const FlowState& s) {
  const Grid& g = s.grid();
  RealSamples u, v, ux, uy, vx, vy, cx, cy;
  fft_inverse_pair(s.v.x, s.v.y, u, v);
  const RealSamples c = fft_inverse(s.c);
  fft_inverse_pair(partial_x(s.v.x), partial_y(s.v.x), ux, uy);
  fft_inverse_pair(partial_x(s.v.y), partial_y(s.v.y), vx, vy);
  fft_inverse_pair(partial_x(s.c), partial_y(s.c), cx, cy);
  const double gb = s.gamma_bar;
  const RealSamples fx = -(u * ux + v * uy) - gb * c * cx;
  const RealSamples fy = -(u * vx + v * vy) - gb * c * cy;
  const RealSamples gg = -(u * cx + v * cy) - gb * c * (ux + vy);
  NonlinearRhs r{VectorField::zeros(g), SpectralField::zeros(g)};
  fft_forward_pair(g, fx, fy, r.f.x, r.f.y);
  r.g = real_part(fft_forward(g, gg));
  dealias(r.f);
  dealias(r.g);
  return r;
}

FlowState acoustic_exact_step(const FlowState& s, double dt) {
  if (dt == 0.0) return s;
  const Grid& g = s.grid();
  const Eigen::ArrayXXd& kx = g.kx_deriv();
  const Eigen::ArrayXXd& ky = g.ky_deriv();
  const Eigen::ArrayXXd& kabs = g.kabs();
  const cplx I{0.0, 1.0};
  FlowState out = s;
  for (Eigen::Index j = 0; j < kx.size(); ++j) {
    const double kd = std::hypot(kx(j), ky(j));
    if (kd == 0.0) continue;
    const double nx = kx(j) / kd;
    const double ny = ky(j) / kd;
    const cplx a = nx * s.v.x.modes(j) + ny * s.v.y.modes(j);
    const cplx b = s.c.modes(j);
    const double theta = kabs(j) * dt / s.eps;
    const double cs = std::cos(theta);
    const double sn = std::sin(theta);
    const cplx a2 = a * cs - I * b * sn;
    const cplx b2 = b * cs - I * a * sn;
    out.v.x.modes(j) += nx * (a2 - a);
    out.v.y.modes(j) += ny * (a2 - a);
    out.c.modes(j) = b2;
  }
  return out;
}

double stable_dt(const FlowState& s, const StepperConfig& cfg) {
  RealSamples u, v;
  fft_inverse_pair(s.v.x, s.v.y, u, v);
  const double vmax = (u.square() + v.square()).sqrt().maxCoeff();
  const double cmax = fft_inverse(s.c).abs().maxCoeff();
  const double dt = cfg.cfl * s.grid().spacing() / (vmax + s.gamma_bar * cmax + kTiny);
  return std::min(cfg.max_dt, dt);
}

FlowState step(const FlowState& s, const StepperConfig& cfg, double dt) {
  FlowState out = cfg.acoustic ? acoustic_exact_step(s, 0.5 * dt) : s;
  if (cfg.nonlinear) out = rk4(out, cfg, dt);
  if (cfg.acoustic) out = acoustic_exact_step(out, 0.5 * dt);
  if (cfg.dealias_every_step) {
    dealias(out.v);
    dealias(out.c);
  }
  out.time = s.time + dt;
  if (!finite(out)) throw Blowup("non-finite state", out.time);
  return out;
}

FlowState step(const FlowState& s, const StepperConfig& cfg) {
  return step(s, cfg, cfg.fixed_dt > 0.0 ? cfg.fixed_dt : stable_dt(s, cfg));
}

std::vector<std::string> compressible_columns(bool with_profile) {
  std::vector<std::string> cols = {"t",        "grad_v_inf", "grad_c_inf", "div_v_inf",
                                   "omega_inf", "l2_vc",     "l2_v",      "b2_21_vc"};
  if (with_profile) cols.push_back("b2_21_psi_vc");
  for (const char* c : {"omega_b0_inf1", "div_b0_inf1", "div_b12_41", "qv_inf", "c_inf",
                        "int_V", "int_grad_v", "int_div_inf", "int_div_b0", "int_div_b12_4"}) {
    cols.emplace_back(c);
  }
  return cols;
}

FlowState run(const FlowState& initial, double T, const StepperConfig& cfg, RunLedger& ledger,
              const RunOptions& options) {
  validate_state(initial);
  validate_config(cfg);
  if (!(T > 0.0)) throw std::invalid_argument("run: T must be positive");
  const bool with_profile = options.profile.has_value();
  ledger = RunLedger(compressible_columns(with_profile));
  Accumulator acc_v, acc_grad, acc_div, acc_div_b0, acc_div_b12;

  const double t0 = initial.time;
  const double t_end = t0 + T;
  auto record = [&](const FlowState& s) {
    const Diagnostics d = diagnose(s, options.profile);
    std::vector<double> row = {s.time, d.grad_v, d.grad_c, d.div_v, d.omega, d.l2, d.l2_v, d.b2};
    if (with_profile) row.push_back(d.b2_psi);
    row.insert(row.end(), {d.omega_b0, d.div_b0, d.div_b12_4, d.qv, d.c,
                           acc_v.add(s.time, d.grad_v + d.grad_c), acc_grad.add(s.time, d.grad_v),
                           acc_div.add(s.time, d.div_v), acc_div_b0.add(s.time, d.div_b0),
                           acc_div_b12.add(s.time, d.div_b12_4)});
    ledger.append(row);
    if (!(d.grad_v < cfg.blowup_grad) || !(d.b2 < cfg.blowup_besov)) {
      throw Blowup("blowup threshold crossed", s.time);
    }
  };

  std::vector<double> outputs;
  for (double t : options.output_times) {
    if (t > 0.0 && t <= T) outputs.push_back(t0 + t);
  }
  std::sort(outputs.begin(), outputs.end());
  size_t next_out = 0;

  FlowState s = initial;
  record(s);
  if (options.observer) options.observer(s);
  const int stride = std::max(1, options.diag_stride);
  long count = 0;
  while (s.time < t_end) {
    double dt = cfg.fixed_dt > 0.0 ? cfg.fixed_dt : stable_dt(s, cfg);
    double target = t_end;
    while (next_out < outputs.size() && outputs[next_out] <= s.time) ++next_out;
    if (next_out < outputs.size()) target = std::min(target, outputs[next_out]);
    // Snap onto the target when within a small fraction of a step.
    bool hit = false;
    if (s.time + dt * (1.0 + 1e-9) >= target) {
      dt = target - s.time;
      hit = true;
    }
    s = step(s, cfg, dt);
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
