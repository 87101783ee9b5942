#include <doctest.h>

#include <cmath>
#include <array>
#include <sstream>

#include "helpers.hpp"
#include "machlab/bounds.hpp"
#include "machlab/compressible.hpp"
#include "machlab/norms.hpp"
#include "machlab/operators.hpp"

using namespace machlab;

TEST_CASE("lifespan model") {
  const LifespanModel e = make_lifespan_model(make_named_profile("exp:1", 8));
  CHECK(e.alpha == doctest::Approx(1.0));
  CHECK(e.beta == doctest::Approx(1.0));
  const LifespanModel p = make_lifespan_model(make_named_profile("power:2", 8));
  CHECK(p.alpha == doctest::Approx(std::log(4.0)));
  CHECK(p.beta == doctest::Approx(1.0 / std::log(4.0)));
  CHECK(make_lifespan_model(make_named_profile("constant", 8)).beta == 1.0);
  CHECK_THROWS(make_lifespan_model(make_named_profile("constant", 8), 0.0));
}

TEST_CASE("phi and lifespan monotonicity") {
  for (const char* name : {"exp:1", "power:2"}) {
    const LifespanModel m = make_lifespan_model(make_named_profile(name, 8), 1.5);
    double prev_phi = 0.0, prev_T = 1e300;
    for (double eps : {1e-12, 1e-9, 1e-6, 1e-4, 1e-3, 1e-2, 0.05, 0.1}) {
      const double phi = phi_of_eps(m, eps);
      CHECK(phi > prev_phi);
      prev_phi = phi;
      const LifespanPrediction lp = lifespan_prediction(m, eps);
      if (lp.defined) {
        CHECK(lp.T < prev_T);
        prev_T = lp.T;
      }
    }
    CHECK(phi_of_eps(m, 1e-12) < 1.0);
  }
  CHECK_THROWS(phi_of_eps(make_lifespan_model(make_named_profile("exp:1", 3)), 1.0));
  CHECK_THROWS(lifespan_prediction(make_lifespan_model(make_named_profile("exp:1", 3)), 0.0));
}

TEST_CASE("lifespan closed forms") {
  const double C0 = 0.7;
  const LifespanModel e = make_lifespan_model(make_named_profile("exp:1", 4), C0);
  const LifespanModel p = make_lifespan_model(make_named_profile("power:2", 4), C0);
  for (double eps : {1e-8, 1e-4, 0.01, 0.05}) {
    const double L = std::log(1.0 / eps);
    CHECK(std::abs(lifespan_prediction(e, eps).T - std::log(L) / C0) <= 1e-12);
    CHECK(std::abs(lifespan_prediction(p, eps).T - std::log(2.0 * std::log(L + 2.0)) / C0) <= 1e-12);
  }
  const LifespanPrediction edge = lifespan_prediction(e, std::exp(-1.0));
  CHECK(edge.defined);
  CHECK(std::abs(edge.T) <= 1e-15);

  // Degenerate profile: Phi constant, T undefined.
  const LifespanModel c = make_lifespan_model(make_named_profile("constant", 4));
  CHECK(phi_of_eps(c, 1e-6) == phi_of_eps(c, 0.5));
  CHECK_FALSE(lifespan_prediction(c, 1e-6).defined);
  CHECK_FALSE(lifespan_prediction(c, 1e-6).phi_defined);
  CHECK(std::isnan(lifespan_prediction(c, 1e-6).ratio));

  const LifespanPrediction both = lifespan_prediction(e, 1e-40);
  CHECK(both.phi_defined);
  CHECK(both.ratio == doctest::Approx(both.T_phi / both.T));
}

TEST_CASE("frequency cutoff") {
  CHECK(cutoff_N(0.5) == 1);
  CHECK(cutoff_N(std::ldexp(1.0, -8)) == 1);
  CHECK(cutoff_N(std::ldexp(1.0, -9)) == 2);
  CHECK(cutoff_N(std::ldexp(1.0, -16)) == 2);
}

namespace {

SweepRun synthetic_run(double eps, double level) {
  SweepRun r{eps, 32, 1.0, 1.0, RunLedger(compressible_columns(false))};
  const auto cols = compressible_columns(false);
  for (int i = 0; i <= 4; ++i) {
    std::vector<double> row(cols.size(), 0.0);
    row[0] = 0.25 * i;
    for (size_t c = 1; c < cols.size(); ++c) {
      if (cols[c].rfind("int_", 0) == 0) row[c] = 0.25 * i;
    }
    auto set = [&](const char* name, double v) {
      for (size_t c = 0; c < cols.size(); ++c)
        if (cols[c] == name) row[c] = v;
    };
    set("div_v_inf", level);
    set("grad_c_inf", level);
    set("qv_inf", level);
    set("c_inf", level);
    r.ledger.append(row);
  }
  return r;
}

}  // namespace

TEST_CASE("acoustic decay report") {
  const LifespanModel m = make_lifespan_model(make_named_profile("exp:1", 8));
  std::vector<SweepRun> runs = {synthetic_run(0.05, 0.5), synthetic_run(0.2, 1.0), synthetic_run(0.1, 0.7)};
  const AcousticDecayReport rep = check_acoustic_decay(runs, m);
  REQUIRE(rep.rows.size() == 3);
  CHECK(rep.rows[0].eps == 0.2);
  CHECK(rep.rows[0].l1_div_gradc == doctest::Approx(2.0));
  CHECK(rep.rows[0].l4_qv_c == doctest::Approx(2.0));
  CHECK(rep.monotone_l1);
  CHECK(rep.monotone_l4);
  CHECK(rep.eta_fit > 0.0);
  CHECK(rep.bound_l1.fitted > 0.0);

  runs.push_back(synthetic_run(0.025, 0.6));
  CHECK_FALSE(check_acoustic_decay(runs, m).monotone_l1);
  runs.back().T = 2.0;
  CHECK_THROWS(check_acoustic_decay(runs, m));

  std::ostringstream out;
  write_acoustic_decay_csv(out, rep);
  CHECK(out.str().rfind("eps,l1_div_gradc,l4_qv_c,l4_scaled,bound_l1,bound_l4\n", 0) == 0);
}

TEST_CASE("incompressible limit report") {
  const Grid g(32, 2.0 * M_PI);
  const VectorField ref = leray_P(testing::random_vector(g, 5));
  const VectorField bump = leray_P(testing::random_vector(g, 6));
  std::vector<LimitSeries> series;
  for (double eps : {0.2, 0.1, 0.05}) {
    std::vector<TimedField> proj, refs;
    for (double t : {0.0, 0.5, 1.0}) {
      proj.push_back({t, ref + (eps * (1.0 + t)) * bump});
      refs.push_back({t, ref});
    }
    series.push_back(limit_series(eps, proj, refs, make_named_profile("power:1", 6)));
  }
  CHECK(series[0].initial_gap == doctest::Approx(0.2 * l2_norm_spectral(std::span<const SpectralField>(std::array{bump.x, bump.y}))));
  CHECK(series[0].b2_psi.size() == 3);
  const IncompressibleLimitReport rep =
      check_incompressible_limit(series, make_lifespan_model(make_named_profile("exp:1", 8)));
  CHECK(rep.monotone_l2);
  CHECK(rep.monotone_b2);
  CHECK(rep.reduction == doctest::Approx(0.25));
  CHECK(rep.rate_bound.pass);

  std::vector<TimedField> a = {{0.0, ref}}, b = {{0.1, ref}};
  CHECK_THROWS(limit_series(0.1, a, b));
}

TEST_CASE("gradient split") {
  const Grid g(32, 2.0 * M_PI);
  std::vector<GradientSplitData> hold;
  for (int i = 0; i < 5; ++i) hold.push_back(gradient_split_from_field(testing::random_vector(g, 200 + i)));
  const InequalityReport rep = check_gradient_split(gradient_split_from_field(testing::random_vector(g, 199)), hold);
  MESSAGE(rep.line());
  CHECK(rep.pass);
  CHECK(rep.fitted > 0.0);
}
