#include <doctest.h>

#include <cmath>
#include <sstream>

#include "helpers.hpp"
#include "machlab/norms.hpp"
#include "machlab/transport.hpp"

using namespace machlab;
using machlab::testing::sample;

namespace {

const double kTwoPi = 2.0 * M_PI;

RealSamples bump(const Grid& g, double a) {
  return sample(g, [a](double x, double y) { return std::exp(a * (std::cos(x) + std::cos(y) - 2.0)); });
}

}  // namespace

TEST_CASE("velocity catalog") {
  CHECK_THROWS(SyntheticVelocity::parse("swirl:1", kTwoPi));
  CHECK_THROWS(SyntheticVelocity::parse("shear:1", kTwoPi));
  CHECK_THROWS(SyntheticVelocity::parse("mono:1:0:0:1", kTwoPi));
  CHECK_THROWS(SyntheticVelocity::parse("shear:a:1", kTwoPi));

  const auto shear = SyntheticVelocity::parse("shear:1:1", kTwoPi);
  CHECK(shear.divergence_free());
  CHECK(shear.periodic());
  const auto mono = SyntheticVelocity::parse("shear:0.5:1+mono:0.3:1:2:4", kTwoPi);
  CHECK_FALSE(mono.divergence_free());
  const auto exp = SyntheticVelocity::parse("expand:0.2", kTwoPi);
  CHECK_FALSE(exp.periodic());
  CHECK(exp(0.0, 1.0, 2.0).div() == doctest::Approx(0.2));
  CHECK(SyntheticVelocity::parse("zero", kTwoPi)(1.0, 1.0, 1.0).u == 0.0);

  // Gradients against centred differences.
  const double h = 1e-5;
  for (double t : {0.1, 0.7}) {
    const VelocitySample s = mono(t, 1.3, 0.4);
    const VelocitySample xp = mono(t, 1.3 + h, 0.4), xm = mono(t, 1.3 - h, 0.4);
    const VelocitySample yp = mono(t, 1.3, 0.4 + h), ym = mono(t, 1.3, 0.4 - h);
    CHECK(s.ux == doctest::Approx((xp.u - xm.u) / (2 * h)).epsilon(1e-8));
    CHECK(s.vx == doctest::Approx((xp.v - xm.v) / (2 * h)).epsilon(1e-8));
    CHECK(s.uy == doctest::Approx((yp.u - ym.u) / (2 * h)).epsilon(1e-8));
    CHECK(s.vy == doctest::Approx((yp.v - ym.v) / (2 * h)).epsilon(1e-8));
  }
  const Grid g(32, kTwoPi);
  RealSamples u, v;
  mono.sample(g, 0.3, u, v);
  CHECK((u.square() + v.square()).sqrt().maxCoeff() <= mono.speed_bound());
}

TEST_CASE("cubic interpolation") {
  const Grid g(32, kTwoPi);
  const RealSamples f = bump(g, 1.0);
  CHECK(interpolate_cubic(f, g.spacing(), 3 * g.spacing(), 5 * g.spacing()) == doctest::Approx(f(3, 5)).epsilon(1e-14));
  // Periodic wrap.
  CHECK(interpolate_cubic(f, g.spacing(), kTwoPi + 0.3, -kTwoPi + 0.2) ==
        doctest::Approx(interpolate_cubic(f, g.spacing(), 0.3, 0.2)).epsilon(1e-13));
  const double exact = std::exp(std::cos(0.31) + std::cos(1.17) - 2.0);
  CHECK(std::abs(interpolate_cubic(f, g.spacing(), 0.31, 1.17) - exact) <= 1e-4);
}

TEST_CASE("oracle closed forms") {
  const Grid g(16, kTwoPi);
  const RealSamples one = RealSamples::Ones(16, 16);
  // Uniform expansion: f = exp(-d T) everywhere.
  const RealSamples f = solve_transport_oracle(g, one, SyntheticVelocity::parse("expand:0.3", kTwoPi), 0.8, 20);
  CHECK((f - std::exp(-0.24)).abs().maxCoeff() <= 1e-13);
  // Zero velocity is the identity.
  const RealSamples b = bump(g, 2.0);
  CHECK((solve_transport_oracle(g, b, SyntheticVelocity::parse("zero", kTwoPi), 1.0, 4) - b).abs().maxCoeff() <=
        1e-15);
  CHECK_THROWS(solve_transport_oracle(g, b, SyntheticVelocity::parse("zero", kTwoPi), 1.0, 0));
}

TEST_CASE("spectral solver against the oracle") {
  const Grid g(64, kTwoPi);
  const RealSamples f0 = bump(g, 2.0);
  const SpectralField f0s = fft_forward(g, f0);
  for (const char* spec : {"shear:1:1", "mono:0.5:1:1:3"}) {
    const auto vel = SyntheticVelocity::parse(spec, kTwoPi);
    RunLedger ledger;
    const SpectralField fT = solve_transport_spectral(f0s, vel, 0.5, ledger);
    const RealSamples oracle = solve_transport_oracle(g, f0, vel, 0.5, 100);
    const double dist = (fft_inverse(fT) - oracle).abs().maxCoeff();
    MESSAGE(std::string(spec) << " distance " << dist);
    CHECK(dist <= 1e-3);
    CHECK(ledger.last("t") == 0.5);
    const auto mass = ledger.column("f_mass");
    CHECK(std::abs(mass.back() - mass.front()) <= 1e-12 * mass.front());
    if (vel.divergence_free()) {
      CHECK(ledger.last("div_v_inf") <= 1e-14);
      CHECK(ledger.last("int_div_b12_4") <= 1e-12);
    }
  }
  RunLedger ledger;
  CHECK_THROWS(solve_transport_spectral(f0s, SyntheticVelocity::parse("expand:1", kTwoPi), 1.0, ledger));
}

TEST_CASE("log estimate bookkeeping") {
  RunLedger ledger(transport_columns());
  // f_b0 grows linearly with int_grad_v, no divergence.
  for (int i = 0; i <= 10; ++i) {
    const double t = 0.1 * i;
    const double row[] = {t, 1.0, 1.0 + t, 1.0, 1.0, 0.0, 0.0, 0.0, t, 0.0};
    ledger.append(row);
  }
  const double C = fit_log_estimate(ledger);
  CHECK(C == doctest::Approx(1.0).epsilon(1e-12));
  const LogEstimateReport rep = check_log_estimate(ledger, C);
  CHECK(rep.pass);
  CHECK_FALSE(check_log_estimate(ledger, 0.9).pass);
  CHECK(rep.rhs == rep.linear_rhs);

  std::ostringstream out;
  write_log_estimate_csv(out, rep, std::vector<double>(rep.t.size(), 0.0));
  CHECK(out.str().rfind("t,linf_distance,lhs,rhs,ratio\n", 0) == 0);
  RunLedger wrong({"t", "x"});
  CHECK_THROWS_AS(check_log_estimate(wrong, 1.0), std::out_of_range);
}
