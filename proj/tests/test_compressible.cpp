#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "machlab/acoustic.hpp"
#include "machlab/compressible.hpp"
#include "machlab/incompressible.hpp"
#include "machlab/norms.hpp"
#include "machlab/operators.hpp"

using namespace machlab;
using machlab::testing::max_abs;
using machlab::testing::random_field;
using machlab::testing::random_vector;
using machlab::testing::rel_diff;
using machlab::testing::sample;

namespace {

const double kTwoPi = 2.0 * M_PI;

SpectralField field(const Grid& g, double (*f)(double, double)) {
  SpectralField u = fft_forward(g, sample(g, f));
  dealias(u);
  return u;
}

// Smooth random data with modes only in |k| <= 4 (L = 2 pi).
SpectralField smooth_field(const Grid& g, std::uint64_t seed, double size) {
  SpectralField u = random_field(g, seed, true);
  for (Eigen::Index j = 0; j < u.modes.size(); ++j) {
    if (g.kabs()(j) > 4.0) u.modes(j) = 0.0;
  }
  const double m = lp_norm(u, kInf);
  return (size / m) * u;
}

FlowState smooth_state(const Grid& g, std::uint64_t seed, double eps, double size = 0.5) {
  return {{smooth_field(g, seed, size), smooth_field(g, seed + 1, size)},
          smooth_field(g, seed + 2, size), eps, 0.2, 0.0};
}

double state_diff(const FlowState& a, const FlowState& b) {
  return std::max({rel_diff(a.v.x, b.v.x), rel_diff(a.v.y, b.v.y), rel_diff(a.c, b.c)});
}

}  // namespace

TEST_CASE("rhs examples") {
  const Grid g(32, kTwoPi);
  const FlowState rest{VectorField::zeros(g), field(g, [](double x, double) { return std::cos(x); }),
                       0.1, 0.3, 0.0};
  NonlinearRhs r = rhs_nonlinear(rest);
  // -gamma_bar c grad c = 0.3 cos x sin x e_x = 0.15 sin 2x e_x.
  const SpectralField expect = field(g, [](double x, double) { return 0.15 * std::sin(2.0 * x); });
  CHECK(rel_diff(r.f.x, expect) <= 1e-12);
  CHECK(max_abs(r.f.y.modes) <= 1e-14);
  CHECK(max_abs(r.g.modes) <= 1e-14);

  // Divergence-free shear: v.grad v = 0 and g = 0 with c = 0.
  const FlowState shear{{field(g, [](double, double y) { return std::sin(y); }), SpectralField::zeros(g)},
                        SpectralField::zeros(g), 0.1, 0.2, 0.0};
  r = rhs_nonlinear(shear);
  CHECK(max_abs(r.f.x.modes) <= 1e-14);
  CHECK(max_abs(r.g.modes) <= 1e-14);

  // v = (sin x, 0), c = cos y:
  //   f = (-sin x cos x, 0) - g c grad c = (-1/2 sin 2x, 1/2 g sin 2y)
  //   g = -v.grad c - g c div v = -g cos y cos x.
  const FlowState two{{field(g, [](double x, double) { return std::sin(x); }), SpectralField::zeros(g)},
                      field(g, [](double, double y) { return std::cos(y); }), 0.1, 0.2, 0.0};
  r = rhs_nonlinear(two);
  CHECK(rel_diff(r.f.x, field(g, [](double x, double) { return -0.5 * std::sin(2.0 * x); })) <= 1e-12);
  CHECK(rel_diff(r.f.y, field(g, [](double, double y) { return 0.1 * std::sin(2.0 * y); })) <= 1e-12);
  CHECK(rel_diff(r.g, field(g, [](double x, double y) { return -0.2 * std::cos(x) * std::cos(y); })) <=
        1e-12);
  CHECK(r.f.x.dealiased);
}

TEST_CASE("acoustic step identities") {
  const Grid g(32, 4.0 * M_PI);
  const FlowState s{random_vector(g, 5), random_field(g, 6), 0.1, 0.2, 0.0};
  CHECK(state_diff(acoustic_exact_step(s, 0.0), s) == 0.0);

  const FlowState fwd = acoustic_exact_step(s, 0.037);
  CHECK(state_diff(acoustic_exact_step(fwd, -0.037), s) <= 1e-12);
  CHECK(rel_diff(leray_P(fwd.v).x, leray_P(s.v).x) <= 1e-12);
  CHECK(fwd.c.modes(0, 0) == s.c.modes(0, 0));

  // Per-mode energy |a|^2 + |b|^2.
  const VectorField q0 = leray_Q(s.v), q1 = leray_Q(fwd.v);
  double worst = 0.0;
  for (Eigen::Index j = 0; j < s.c.modes.size(); ++j) {
    const double e0 = std::norm(q0.x.modes(j)) + std::norm(q0.y.modes(j)) + std::norm(s.c.modes(j));
    const double e1 = std::norm(q1.x.modes(j)) + std::norm(q1.y.modes(j)) + std::norm(fwd.c.modes(j));
    worst = std::max(worst, std::abs(e1 - e0) / std::max(e0, 1e-300));
  }
  CHECK(worst <= 1e-13);
}

TEST_CASE("acoustic step periodicity at a single mode") {
  const Grid g(32, kTwoPi);
  FlowState s{VectorField::zeros(g), SpectralField::zeros(g), 0.05, 0.2, 0.0};
  s.v.x.modes(3, 0) = 0.5;
  s.v.x.modes(g.n() - 3, 0) = 0.5;
  s.c.modes(3, 0) = cplx(0.2, 0.1);
  s.c.modes(g.n() - 3, 0) = cplx(0.2, -0.1);
  const FlowState back = acoustic_exact_step(s, kTwoPi * s.eps / 3.0);
  CHECK(state_diff(back, s) <= 1e-12);
}

TEST_CASE("acoustic step matches the free half-wave propagator") {
  const Grid g(32, 4.0 * M_PI);
  FlowState s{random_vector(g, 15), random_field(g, 16, true), 0.1, 0.2, 0.0};
  const double t = 0.29;
  const AcousticPair pair = make_acoustic(s);
  const AcousticPair moved{free_propagate(pair.gamma, t, s.eps), free_propagate(pair.upsilon, t, s.eps),
                           s.eps};
  const FlowState stepped = acoustic_exact_step(s, t);
  CHECK(rel_diff(acoustic_velocity(moved).x, leray_Q(stepped.v).x) <= 1e-12);
  CHECK(rel_diff(acoustic_velocity(moved).y, leray_Q(stepped.v).y) <= 1e-12);
  CHECK(rel_diff(acoustic_sound_speed(moved), stepped.c) <= 1e-12);
}

TEST_CASE("zero data and disabled nonlinearity") {
  const Grid g(32, kTwoPi);
  StepperConfig cfg;
  FlowState zero{VectorField::zeros(g), SpectralField::zeros(g), 0.1, 0.2, 0.0};
  RunLedger ledger;
  const FlowState end = run(zero, 0.1, cfg, ledger);
  CHECK(max_abs(end.v.x.modes) == 0.0);
  CHECK(max_abs(end.c.modes) == 0.0);
  for (const auto& name : ledger.columns()) {
    if (name == "t") continue;
    for (double v : ledger.column(name)) CHECK(v == 0.0);
  }

  cfg.nonlinear = false;
  const FlowState s = smooth_state(g, 30, 0.1);
  CHECK(state_diff(step(s, cfg, 0.02), acoustic_exact_step(s, 0.02)) <= 1e-12);
}

TEST_CASE("stable dt is independent of eps") {
  const Grid g(32, kTwoPi);
  StepperConfig cfg;
  cfg.max_dt = 1.0;
  FlowState s = smooth_state(g, 40, 0.5);
  const double a = stable_dt(s, cfg);
  s.eps = 0.01;
  CHECK(stable_dt(s, cfg) == a);
  CHECK(a == doctest::Approx(0.4 * g.spacing() / (lp_norm(s.v, kInf) + 0.2 * lp_norm(s.c, kInf))));
  cfg.max_dt = 1e-4;
  CHECK(stable_dt(s, cfg) == 1e-4);
}

TEST_CASE("config validation") {
  StepperConfig cfg;
  CHECK_NOTHROW(validate_config(cfg));
  cfg.cfl = 1.0;
  CHECK_THROWS(validate_config(cfg));
  cfg.cfl = 0.4;
  cfg.blowup_grad = 0.0;
  CHECK_THROWS(validate_config(cfg));
}

TEST_CASE("run bookkeeping") {
  const Grid g(32, kTwoPi);
  StepperConfig cfg;
  cfg.max_dt = 0.013;
  RunOptions opt;
  opt.output_times = {0.05, 0.1, 0.2};
  std::vector<double> seen;
  opt.observer = [&](const FlowState& s) { seen.push_back(s.time); };
  opt.profile = make_named_profile("exp:1", 10);
  RunLedger ledger;
  const FlowState end = run(smooth_state(g, 50, 0.1), 0.2, cfg, ledger, opt);
  CHECK(end.time == 0.2);
  CHECK(seen == std::vector<double>{0.0, 0.05, 0.1, 0.2});
  CHECK(ledger.columns() == compressible_columns(true));
  const auto t = ledger.column("t");
  CHECK(t.front() == 0.0);
  CHECK(t.back() == 0.2);
  const auto b = ledger.column("b2_21_vc");
  const auto bp = ledger.column("b2_21_psi_vc");
  for (size_t i = 0; i < b.size(); ++i) CHECK(bp[i] >= b[i]);

  cfg.blowup_grad = 1e-3;
  try {
    run(smooth_state(g, 50, 0.1), 0.2, cfg, ledger);
    FAIL("expected blowup");
  } catch (const Blowup& e) {
    CHECK(e.time() == 0.0);
    CHECK(ledger.rows() == 1);
  }
  CHECK_THROWS_AS(run(smooth_state(g, 50, 0.1), 0.0, StepperConfig{}, ledger), std::invalid_argument);
}

TEST_CASE("incompressible consistency") {
  const Grid g(64, kTwoPi);
  const SpectralField omega = smooth_field(g, 60, 1.0);
  const VectorField v0 = velocity_from_vorticity(omega);
  FlowState s{v0, SpectralField::zeros(g), 0.1, 0.2, 0.0};
  StepperConfig cfg;
  cfg.project_nonlinear = true;
  cfg.fixed_dt = 0.01;
  IncompressibleState w{omega, 0.0};
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    s = step(s, cfg);
    w = step_incompressible(w, cfg.fixed_dt);
    const VectorField ref = velocity_from_vorticity(w.omega);
    worst = std::max(worst, lp_norm(s.v - ref, kInf));
  }
  MESSAGE("velocity mismatch over T=1: " << worst);
  CHECK(worst <= 1e-6);
  CHECK(max_abs(s.c.modes) <= 1e-14);
}
