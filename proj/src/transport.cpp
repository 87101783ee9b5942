#include "machlab/transport.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "machlab/littlewood_paley.hpp"
#include "machlab/norms.hpp"
#include "machlab/operators.hpp"

namespace machlab {

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  return out;
}

double number(const std::string& s, const std::string& spec) {
  try {
    size_t used = 0;
    const double x = std::stod(s, &used);
    if (used == s.size() && std::isfinite(x)) return x;
  } catch (const std::exception&) {
  }
  throw std::invalid_argument("velocity: bad number '" + s + "' in '" + spec + "'");
}

}  // namespace

SyntheticVelocity SyntheticVelocity::parse(const std::string& spec, double box_length) {
  if (!(box_length > 0.0)) throw std::invalid_argument("velocity: box length must be positive");
  SyntheticVelocity vel;
  vel.name_ = spec;
  vel.length_ = box_length;
  const double k0 = 2.0 * M_PI / box_length;
  for (const auto& term : split(spec, '+')) {
    const auto f = split(term, ':');
    if (f.empty()) throw std::invalid_argument("velocity: empty term in '" + spec + "'");
    Term t{};
    if (f[0] == "zero" && f.size() == 1) {
      continue;
    } else if (f[0] == "shear" && f.size() == 3) {
      t.kind = Term::Kind::shear;
      t.a = number(f[1], spec);
      t.kx = t.ky = k0 * number(f[2], spec);
    } else if (f[0] == "mono" && f.size() == 5) {
      t.kind = Term::Kind::mono;
      t.a = number(f[1], spec);
      t.kx = k0 * number(f[2], spec);
      t.ky = k0 * number(f[3], spec);
      t.omega = number(f[4], spec);
      if (t.kx == 0.0 && t.ky == 0.0) throw std::invalid_argument("velocity: mono needs k != 0");
      vel.divergence_free_ = vel.divergence_free_ && t.a == 0.0;
    } else if (f[0] == "expand" && f.size() == 2) {
      t.kind = Term::Kind::expand;
      t.a = number(f[1], spec);
      vel.periodic_ = false;
      vel.divergence_free_ = vel.divergence_free_ && t.a == 0.0;
    } else {
      throw std::invalid_argument("velocity: unknown term '" + term +
                                  "' (expected zero, shear:A:m, mono:A:m1:m2:Omega, expand:d)");
    }
    vel.terms_.push_back(t);
  }
  return vel;
}

VelocitySample SyntheticVelocity::operator()(double t, double x, double y) const {
  VelocitySample s;
  for (const auto& term : terms_) {
    switch (term.kind) {
      case Term::Kind::shear: {
        s.u += term.a * std::sin(term.ky * y);
        s.v += term.a * std::sin(term.kx * x);
        s.uy += term.a * term.ky * std::cos(term.ky * y);
        s.vx += term.a * term.kx * std::cos(term.kx * x);
        break;
      }
      case Term::Kind::mono: {
        const double kabs = std::hypot(term.kx, term.ky);
        const double amp = term.a * std::sin(term.omega * t) / kabs;
        const double phase = term.kx * x + term.ky * y;
        const double cs = std::cos(phase);
        const double sn = std::sin(phase);
        s.u += amp * term.kx * cs;
        s.v += amp * term.ky * cs;
        s.ux -= amp * term.kx * term.kx * sn;
        s.uy -= amp * term.kx * term.ky * sn;
        s.vx -= amp * term.ky * term.kx * sn;
        s.vy -= amp * term.ky * term.ky * sn;
        break;
      }
      case Term::Kind::expand: {
        s.u += 0.5 * term.a * (x - 0.5 * length_);
        s.v += 0.5 * term.a * (y - 0.5 * length_);
        s.ux += 0.5 * term.a;
        s.vy += 0.5 * term.a;
        break;
      }
    }
  }
  return s;
}

double SyntheticVelocity::speed_bound() const {
  double b = 0.0;
  for (const auto& term : terms_) {
    if (term.kind == Term::Kind::shear) b += std::sqrt(2.0) * std::abs(term.a);
    if (term.kind == Term::Kind::mono) b += std::abs(term.a);
    if (term.kind == Term::Kind::expand) b += std::sqrt(0.5) * std::abs(term.a) * length_;
  }
  return b;
}

void SyntheticVelocity::sample(const Grid& grid, double t, RealSamples& u, RealSamples& v) const {
  const Eigen::ArrayXd x = grid.coordinates();
  u.resize(grid.n(), grid.n());
  v.resize(grid.n(), grid.n());
  for (int jy = 0; jy < grid.n(); ++jy) {
    for (int jx = 0; jx < grid.n(); ++jx) {
      const VelocitySample s = (*this)(t, x(jx), x(jy));
      u(jx, jy) = s.u;
      v(jx, jy) = s.v;
    }
  }
}

std::vector<std::string> transport_columns() {
  return {"t",          "f_inf",      "f_b0_inf1", "f_mass",     "grad_v_inf",
          "div_v_inf", "div_b12_41", "div_b1_21", "int_grad_v", "int_div_b12_4"};
}

namespace {

SpectralField flux_divergence(const SpectralField& f, const SyntheticVelocity& vel, double t) {
  const Grid& g = f.grid;
  RealSamples u, v;
  vel.sample(g, t, u, v);
  const RealSamples fr = fft_inverse(f);
  SpectralField fx = SpectralField::zeros(g), fy = SpectralField::zeros(g);
  fft_forward_pair(g, RealSamples(fr * u), RealSamples(fr * v), fx, fy);
  VectorField flux{fx, fy};
  dealias(flux);
  SpectralField r = -div(flux);
  return r;
}

}  // namespace

SpectralField solve_transport_spectral(const SpectralField& f0, const SyntheticVelocity& vel,
                                       double T, RunLedger& ledger,
                                       const TransportOptions& options) {
  if (!vel.periodic()) throw std::invalid_argument("spectral transport needs a periodic velocity");
  if (!(T > 0.0)) throw std::invalid_argument("transport: T must be positive");
  const Grid& g = f0.grid;
  const DyadicPartition& part = partition_for(g);
  const Eigen::ArrayXd xs = g.coordinates();
  ledger = RunLedger(transport_columns());
  Accumulator acc_grad, acc_div;

  auto record = [&](const SpectralField& f, double t) {
    const RealSamples fr = fft_inverse(f);
    double grad = 0.0;
    double divmax = 0.0;
    RealSamples divs(g.n(), g.n());
    for (int jy = 0; jy < g.n(); ++jy) {
      for (int jx = 0; jx < g.n(); ++jx) {
        const VelocitySample s = vel(t, xs(jx), xs(jy));
        grad = std::max(grad, std::sqrt(s.ux * s.ux + s.uy * s.uy + s.vx * s.vx + s.vy * s.vy));
        divs(jx, jy) = s.div();
        divmax = std::max(divmax, std::abs(s.div()));
      }
    }
    SpectralField dv = real_part(fft_forward(g, divs));
    dealias(dv);
    const double ps[2] = {4.0, 2.0};
    const auto dsh = shell_norms(part, std::span<const SpectralField>(&dv, 1), ps);
    const double div_b12 = besov_from_shells(dsh[0], 0.5, 1.0);
    const double row[] = {
        t,
        fr.abs().maxCoeff(),
        besov_from_shells(shell_norms(part, std::span<const SpectralField>(&f, 1), kInf), 0.0,
                          1.0),
        f.modes(0, 0).real() * g.length() * g.length(),
        grad,
        divmax,
        div_b12,
        besov_from_shells(dsh[1], 1.0, 1.0),
        acc_grad.add(t, grad),
        acc_div.add(t, div_b12)};
    ledger.append(row);
  };

  SpectralField f = f0;
  dealias(f);
  double t = 0.0;
  record(f, t);
  const double vmax = vel.speed_bound();
  const double dt_nominal = std::min(options.max_dt, options.cfl * g.spacing() / (vmax + 1e-12));
  const long steps = static_cast<long>(std::ceil(T / dt_nominal - 1e-9));
  const double dt = T / static_cast<double>(steps);
  const int stride = std::max(1, options.diag_stride);
  for (long i = 0; i < steps; ++i) {
    const SpectralField k1 = flux_divergence(f, vel, t);
    const SpectralField k2 = flux_divergence({g, f.modes + 0.5 * dt * k1.modes, true}, vel, t + 0.5 * dt);
    const SpectralField k3 = flux_divergence({g, f.modes + 0.5 * dt * k2.modes, true}, vel, t + 0.5 * dt);
    const SpectralField k4 = flux_divergence({g, f.modes + dt * k3.modes, true}, vel, t + dt);
    f.modes += dt / 6.0 * (k1.modes + 2.0 * k2.modes + 2.0 * k3.modes + k4.modes);
    t = i + 1 == steps ? T : static_cast<double>(i + 1) * dt;
    if (!f.modes.isFinite().all()) throw std::runtime_error("transport: non-finite state");
    if (i + 1 == steps || (i + 1) % stride == 0) record(f, t);
  }
  return f;
}

double interpolate_cubic(const RealSamples& f, double spacing, double x, double y) {
  const auto n = f.rows();
  auto weights = [](double s, double w[4]) {
    // Lagrange basis on nodes -1, 0, 1, 2 evaluated at s in [0, 1).
    w[0] = -s * (s - 1.0) * (s - 2.0) / 6.0;
    w[1] = (s + 1.0) * (s - 1.0) * (s - 2.0) / 2.0;
    w[2] = -(s + 1.0) * s * (s - 2.0) / 2.0;
    w[3] = (s + 1.0) * s * (s - 1.0) / 6.0;
  };
  const double gx = x / spacing;
  const double gy = y / spacing;
  const double fx = std::floor(gx);
  const double fy = std::floor(gy);
  double wx[4], wy[4];
  weights(gx - fx, wx);
  weights(gy - fy, wy);
  auto wrap = [n](long j) { return static_cast<Eigen::Index>(((j % n) + n) % n); };
  const long ix = static_cast<long>(fx);
  const long iy = static_cast<long>(fy);
  double acc = 0.0;
  for (int b = 0; b < 4; ++b) {
    double row = 0.0;
    const auto jy = wrap(iy - 1 + b);
    for (int a = 0; a < 4; ++a) row += wx[a] * f(wrap(ix - 1 + a), jy);
    acc += wy[b] * row;
  }
  return acc;
}

RealSamples solve_transport_oracle(const Grid& grid, const RealSamples& f0,
                                   const SyntheticVelocity& vel, double T, int substeps) {
  if (substeps < 1) throw std::invalid_argument("oracle: substeps must be positive");
  if (f0.rows() != grid.n() || f0.cols() != grid.n()) {
    throw std::invalid_argument("oracle: sample array does not match the grid");
  }
  const Eigen::ArrayXd xs = grid.coordinates();
  const double h = -T / substeps;
  RealSamples out(grid.n(), grid.n());
  for (int jy = 0; jy < grid.n(); ++jy) {
    for (int jx = 0; jx < grid.n(); ++jx) {
      // State (X, Y, D) with dD/dtau = div v, integrated from tau = T to 0.
      double X = xs(jx), Y = xs(jy), D = 0.0;
      double tau = T;
      for (int s = 0; s < substeps; ++s) {
        const VelocitySample a = vel(tau, X, Y);
        const VelocitySample b = vel(tau + 0.5 * h, X + 0.5 * h * a.u, Y + 0.5 * h * a.v);
        const VelocitySample c = vel(tau + 0.5 * h, X + 0.5 * h * b.u, Y + 0.5 * h * b.v);
        const VelocitySample d = vel(tau + h, X + h * c.u, Y + h * c.v);
        X += h / 6.0 * (a.u + 2.0 * b.u + 2.0 * c.u + d.u);
        Y += h / 6.0 * (a.v + 2.0 * b.v + 2.0 * c.v + d.v);
        D -= h / 6.0 * (a.div() + 2.0 * b.div() + 2.0 * c.div() + d.div());
        tau = T + (s + 1) * h;
      }
      out(jx, jy) = interpolate_cubic(f0, grid.spacing(), X, Y) * std::exp(-D);
    }
  }
  return out;
}

LogEstimateReport check_log_estimate(const RunLedger& ledger, double C) {
  LogEstimateReport rep;
  rep.C = C;
  rep.t = ledger.column("t");
  rep.lhs = ledger.column("f_b0_inf1");
  const auto ig = ledger.column("int_grad_v");
  const auto id = ledger.column("int_div_b12_4");
  const double f0 = rep.lhs.empty() ? 0.0 : rep.lhs.front();
  rep.pass = true;
  for (size_t i = 0; i < rep.t.size(); ++i) {
    const double growth = 1.0 + ig[i];
    const double r = C * f0 * (1.0 + std::exp(C * ig[i]) * id[i] * id[i]) * growth;
    rep.rhs.push_back(r);
    rep.linear_rhs.push_back(C * f0 * growth);
    const double ratio = rep.lhs[i] == 0.0 ? 0.0 : (r > 0.0 ? rep.lhs[i] / r : kInf);
    rep.ratio.push_back(ratio);
    rep.worst_ratio = std::max(rep.worst_ratio, ratio);
  }
  rep.pass = rep.worst_ratio <= 1.0;
  return rep;
}

double fit_log_estimate(const RunLedger& ledger) {
  return fit_constant([&](double C) { return check_log_estimate(ledger, C).pass; });
}

void write_log_estimate_csv(std::ostream& out, const LogEstimateReport& report,
                            const std::vector<double>& distance) {
  out << "t,linf_distance,lhs,rhs,ratio\n";
  for (size_t i = 0; i < report.t.size(); ++i) {
    out << format_double(report.t[i]) << ','
        << format_double(i < distance.size() ? distance[i] : std::nan("")) << ','
        << format_double(report.lhs[i]) << ',' << format_double(report.rhs[i]) << ','
        << format_double(report.ratio[i]) << '\n';
  }
}

}  // namespace machlab
