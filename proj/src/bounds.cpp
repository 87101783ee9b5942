#include "machlab/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include "machlab/littlewood_paley.hpp"
#include "machlab/norms.hpp"
#include "machlab/operators.hpp"

namespace machlab {

LifespanModel make_lifespan_model(BesovProfile profile, double C0) {
  if (!(C0 > 0.0)) throw std::invalid_argument("lifespan model: C0 must be positive");
  LifespanModel m;
  m.alpha = profile.growth_exponent;
  m.beta = m.alpha > 1.0 ? 1.0 / m.alpha : 1.0;
  m.C0 = C0;
  m.profile = std::move(profile);
  return m;
}

namespace {

void check_eps(double eps) {
  if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("eps must be in (0,1)");
}

}  // namespace

double phi_of_eps(const LifespanModel& model, double eps) {
  check_eps(eps);
  return std::pow(model.profile.at(-std::log(eps) / 8.0), -model.beta);
}

LifespanPrediction lifespan_prediction(const LifespanModel& model, double eps) {
  check_eps(eps);
  LifespanPrediction p;
  const double psi = model.profile.at(-std::log(eps));
  if (psi >= M_E) {
    p.defined = true;
    p.T = std::log(std::log(psi)) / model.C0;
  }
  // exp(exp(C0 T)) = Phi^{-1/2}  =>  C0 T = log(-log(Phi) / 2).
  const double half_log = -0.5 * std::log(phi_of_eps(model, eps));
  if (half_log >= 1.0) {
    p.phi_defined = true;
    p.T_phi = std::log(half_log) / model.C0;
  }
  p.ratio = p.defined && p.phi_defined && p.T > 0.0 ? p.T_phi / p.T : std::nan("");
  return p;
}

int cutoff_N(double eps) {
  check_eps(eps);
  return static_cast<int>(std::ceil(std::log2(1.0 / eps) / 8.0));
}

namespace {

std::vector<double> add(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> out(a.size());
  for (size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
  return out;
}

bool strictly_decreasing(const std::vector<double>& v) {
  for (size_t i = 1; i < v.size(); ++i) {
    if (!(v[i] < v[i - 1])) return false;
  }
  return true;
}

double slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  if (x.size() < 2) return 0.0;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double den = n * sxx - sx * sx;
  return den == 0.0 ? 0.0 : (n * sxy - sx * sy) / den;
}

}  // namespace

AcousticDecayReport check_acoustic_decay(std::span<const SweepRun> runs,
                                         const LifespanModel& model) {
  if (runs.empty()) throw std::invalid_argument("acoustic decay: no runs");
  std::vector<const SweepRun*> order;
  for (const auto& r : runs) {
    if (r.n != runs[0].n || r.length != runs[0].length || r.T != runs[0].T) {
      throw std::invalid_argument("acoustic decay: runs differ in grid or end time");
    }
    if (r.ledger.empty() || std::abs(r.ledger.last("t") - r.T) > 1e-9 * std::max(1.0, r.T)) {
      throw std::invalid_argument("acoustic decay: ledger does not reach T");
    }
    order.push_back(&r);
  }
  std::sort(order.begin(), order.end(), [](auto* a, auto* b) { return a->eps > b->eps; });

  AcousticDecayReport rep;
  std::vector<double> l1, l4, log_eps, log_l1;
  for (const auto* r : order) {
    const auto t = r->ledger.column("t");
    AcousticDecayRow row;
    row.eps = r->eps;
    row.l1_div_gradc =
        mixed_time_norm(t, add(r->ledger.column("div_v_inf"), r->ledger.column("grad_c_inf")), 1.0);
    row.l4_qv_c =
        mixed_time_norm(t, add(r->ledger.column("qv_inf"), r->ledger.column("c_inf")), 4.0);
    row.l4_scaled = row.l4_qv_c / std::pow(r->eps, 0.25);
    l1.push_back(row.l1_div_gradc);
    l4.push_back(row.l4_qv_c);
    log_eps.push_back(std::log(r->eps));
    log_l1.push_back(std::log(std::max(row.l1_div_gradc, 1e-300)));
    rep.rows.push_back(row);
  }
  rep.monotone_l1 = strictly_decreasing(l1);
  rep.monotone_l4 = strictly_decreasing(l4);
  double lo = kInf, hi = 0.0;
  for (const auto& r : rep.rows) {
    lo = std::min(lo, r.l4_scaled);
    hi = std::max(hi, r.l4_scaled);
  }
  rep.scaled_spread = lo > 0.0 ? hi / lo : kInf;
  rep.eta_fit = slope(log_eps, log_l1);

  auto bound_for = [&](size_t i, double power, const std::vector<double>& vals) -> BoundCheck {
    const double phi = std::pow(phi_of_eps(model, rep.rows[i].eps), power);
    const double v = vals[i];
    return [phi, v](double C) { return v == 0.0 ? 0.0 : (C > 0.0 ? v / (C * phi) : HUGE_VAL); };
  };
  std::vector<BoundCheck> hold1, hold4;
  for (size_t i = 1; i < rep.rows.size(); ++i) {
    hold1.push_back(bound_for(i, 0.25, l1));
    hold4.push_back(bound_for(i, 1.0, l4));
  }
  rep.bound_l1 = calibrate_and_check("acoustic L1_T Linf(div v, grad c) <= C0 Phi^{1/4}",
                                     bound_for(0, 0.25, l1), hold1);
  rep.bound_l4 = calibrate_and_check("acoustic L4_T Linf(Qv, c) <= C0 Phi", bound_for(0, 1.0, l4),
                                     hold4);
  for (size_t i = 0; i < rep.rows.size(); ++i) {
    rep.rows[i].bound_l1 = rep.bound_l1.applied * std::pow(phi_of_eps(model, rep.rows[i].eps), 0.25);
    rep.rows[i].bound_l4 = rep.bound_l4.applied * phi_of_eps(model, rep.rows[i].eps);
  }
  return rep;
}

void write_acoustic_decay_csv(std::ostream& out, const AcousticDecayReport& rep) {
  out << "eps,l1_div_gradc,l4_qv_c,l4_scaled,bound_l1,bound_l4\n";
  for (const auto& r : rep.rows) {
    out << format_double(r.eps) << ',' << format_double(r.l1_div_gradc) << ','
        << format_double(r.l4_qv_c) << ',' << format_double(r.l4_scaled) << ','
        << format_double(r.bound_l1) << ',' << format_double(r.bound_l4) << '\n';
  }
}

LimitSeries limit_series(double eps, std::span<const TimedField> projected,
                         std::span<const TimedField> reference,
                         const std::optional<BesovProfile>& comparison) {
  if (projected.size() != reference.size() || projected.empty()) {
    throw std::invalid_argument("incompressible limit: snapshot counts differ");
  }
  LimitSeries s;
  s.eps = eps;
  for (size_t i = 0; i < projected.size(); ++i) {
    if (std::abs(projected[i].t - reference[i].t) > 1e-9) {
      throw std::invalid_argument("incompressible limit: snapshot times are not aligned");
    }
    const VectorField w = projected[i].v - reference[i].v;
    const SpectralField comps[2] = {w.x, w.y};
    const auto shells = shell_norms(partition_for(w.grid()), comps, 2.0);
    s.t.push_back(projected[i].t);
    s.l2.push_back(l2_norm_spectral(comps));
    s.b2.push_back(besov_from_shells(shells, 2.0, 1.0));
    if (comparison) {
      std::vector<double> wts;
      for (size_t q = 0; q < shells.size(); ++q) wts.push_back(comparison->at(static_cast<double>(q) - 1.0));
      s.b2_psi.push_back(besov_from_shells(shells, 2.0, 1.0, wts));
    }
  }
  s.initial_gap = s.l2.front();
  return s;
}

IncompressibleLimitReport check_incompressible_limit(std::span<const LimitSeries> series,
                                                     const LifespanModel& model) {
  if (series.empty()) throw std::invalid_argument("incompressible limit: no runs");
  std::vector<const LimitSeries*> order;
  for (const auto& s : series) order.push_back(&s);
  std::sort(order.begin(), order.end(), [](auto* a, auto* b) { return a->eps > b->eps; });
  IncompressibleLimitReport rep;
  std::vector<double> l2, b2;
  for (const auto* s : order) {
    LimitRow row;
    row.eps = s->eps;
    row.sup_l2 = *std::max_element(s->l2.begin(), s->l2.end());
    row.sup_b2 = *std::max_element(s->b2.begin(), s->b2.end());
    if (!s->b2_psi.empty()) row.sup_b2_psi = *std::max_element(s->b2_psi.begin(), s->b2_psi.end());
    l2.push_back(row.sup_l2);
    b2.push_back(row.sup_b2);
    rep.rows.push_back(row);
  }
  rep.monotone_l2 = strictly_decreasing(l2);
  rep.monotone_b2 = strictly_decreasing(b2);
  rep.reduction = l2.front() > 0.0 ? l2.back() / l2.front() : 0.0;

  auto check_for = [&](const LimitSeries* s) -> BoundCheck {
    const double phi4 = std::pow(phi_of_eps(model, s->eps), 0.25);
    return [s, phi4](double C) {
      double worst = 0.0;
      for (size_t i = 0; i < s->t.size(); ++i) {
        if (s->l2[i] == 0.0) continue;
        const double rhs = C * std::exp(std::exp(C * s->t[i])) * (s->initial_gap + phi4);
        worst = std::max(worst, rhs > 0.0 ? s->l2[i] / rhs : HUGE_VAL);
      }
      return worst;
    };
  };
  std::vector<BoundCheck> holdouts;
  for (size_t i = 1; i < order.size(); ++i) holdouts.push_back(check_for(order[i]));
  rep.rate_bound = calibrate_and_check(
      "limit ||P v_eps - v||_2 <= C0 e^{e^{C0 t}} (||P v0 - v0||_2 + Phi^{1/4})",
      check_for(order[0]), holdouts);
  return rep;
}

void write_incompressible_limit_csv(std::ostream& out, const IncompressibleLimitReport& rep) {
  out << "eps,sup_l2,sup_b2_21,sup_b2_21_psi\n";
  for (const auto& r : rep.rows) {
    out << format_double(r.eps) << ',' << format_double(r.sup_l2) << ','
        << format_double(r.sup_b2) << ',' << format_double(r.sup_b2_psi) << '\n';
  }
}

GradientSplitData gradient_split_from_ledger(const RunLedger& ledger) {
  GradientSplitData d;
  d.lhs = ledger.column("grad_v_inf");
  const auto l2 = ledger.column("l2_v");
  const auto dv = ledger.column("div_b0_inf1");
  const auto om = ledger.column("omega_b0_inf1");
  for (size_t i = 0; i < l2.size(); ++i) d.rhs.push_back(l2[i] + dv[i] + om[i]);
  return d;
}

GradientSplitData gradient_split_from_field(const VectorField& v) {
  const SpectralField comps[2] = {v.x, v.y};
  const SpectralField om = curl2d(v);
  const SpectralField dv = div(v);
  const DyadicPartition& part = partition_for(v.grid());
  GradientSplitData d;
  d.lhs.push_back(grad_sup_norm(v));
  d.rhs.push_back(
      l2_norm_spectral(comps) +
      besov_from_shells(shell_norms(part, std::span<const SpectralField>(&dv, 1), kInf), 0.0, 1.0) +
      besov_from_shells(shell_norms(part, std::span<const SpectralField>(&om, 1), kInf), 0.0, 1.0));
  return d;
}

InequalityReport check_gradient_split(const GradientSplitData& calibration,
                                      std::span<const GradientSplitData> holdouts) {
  std::vector<BoundCheck> hold;
  for (const auto& h : holdouts) {
    hold.push_back([&h](double C) { return worst_linear_ratio(h.lhs, h.rhs, C); });
  }
  return calibrate_and_check(
      "gradient split ||grad v||_inf <= C (||v||_2 + ||div v||_B0 + ||omega||_B0)",
      [&](double C) { return worst_linear_ratio(calibration.lhs, calibration.rhs, C); }, hold);
}

BoundCheck energy_bound(const RunLedger& ledger) {
  const auto l2 = ledger.column("l2_vc");
  const auto idiv = ledger.column("int_div_inf");
  return [l2, idiv](double C) {
    double worst = 0.0;
    for (size_t i = 0; i < l2.size(); ++i) {
      if (l2[i] == 0.0) continue;
      const double rhs = l2.front() * std::exp(C * idiv[i]);
      worst = std::max(worst, rhs > 0.0 ? l2[i] / rhs : HUGE_VAL);
    }
    return worst;
  };
}

BoundCheck hetero_energy_bound(const RunLedger& ledger) {
  const auto b = ledger.column("b2_21_psi_vc");
  const auto V = ledger.column("int_V");
  return [b, V](double C) {
    double worst = 0.0;
    for (size_t i = 0; i < b.size(); ++i) {
      if (b[i] == 0.0) continue;
      const double rhs = C * b.front() * std::exp(C * V[i]);
      worst = std::max(worst, rhs > 0.0 ? b[i] / rhs : HUGE_VAL);
    }
    return worst;
  };
}

BoundCheck vorticity_growth_bound(const RunLedger& ledger) {
  const auto w = ledger.column("omega_b0_inf1");
  const auto ig = ledger.column("int_grad_v");
  return [w, ig](double C) {
    double worst = 0.0;
    for (size_t i = 0; i < w.size(); ++i) {
      if (w[i] == 0.0) continue;
      const double rhs = C * w.front() * (1.0 + ig[i]);
      worst = std::max(worst, rhs > 0.0 ? w[i] / rhs : HUGE_VAL);
    }
    return worst;
  };
}

}  // namespace machlab
