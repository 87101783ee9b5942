#include <doctest.h>

#include <cmath>
#include <sstream>

#include "helpers.hpp"
#include "machlab/acoustic.hpp"
#include "machlab/norms.hpp"
#include "machlab/operators.hpp"

using namespace machlab;
using machlab::testing::random_field;
using machlab::testing::random_vector;
using machlab::testing::rel_diff;
using machlab::testing::sample;

namespace {

FlowState random_state(const Grid& g, std::uint64_t seed, double eps) {
  return {random_vector(g, seed), random_field(g, seed + 3), eps, 0.2, 0.0};
}

SpectralField bump(const Grid& g, double width) {
  const double c = 0.5 * g.length();
  SpectralField u = fft_forward(g, sample(g, [&](double x, double y) {
                                  const double r2 = (x - c) * (x - c) + (y - c) * (y - c);
                                  return std::exp(-r2 / (width * width));
                                }));
  dealias(u);
  return u;
}

}  // namespace

TEST_CASE("state validation") {
  const Grid g(16, 2.0 * M_PI);
  FlowState s = random_state(g, 1, 0.5);
  CHECK_NOTHROW(validate_state(s));
  s.eps = 0.0;
  CHECK_THROWS_AS(validate_state(s), std::invalid_argument);
  s.eps = 1.5;
  CHECK_THROWS_AS(validate_state(s), std::invalid_argument);
  s.eps = 1.0;
  s.gamma_bar = 0.0;
  CHECK_THROWS_AS(validate_state(s), std::invalid_argument);
  s.gamma_bar = 0.2;
  s.c = SpectralField::zeros(Grid(32, 2.0 * M_PI));
  CHECK_THROWS_AS(validate_state(s), std::invalid_argument);
}

TEST_CASE("acoustic pair reassembles Qv and c") {
  const Grid g(32, 4.0 * M_PI);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    FlowState s = random_state(g, 100 + 11 * i, 0.3);
    s.c.modes(0, 0) = 0.0;
    const AcousticPair a = make_acoustic(s);
    const VectorField qv = leray_Q(s.v);
    worst = std::max({worst, rel_diff(acoustic_velocity(a).x, qv.x),
                      rel_diff(acoustic_velocity(a).y, qv.y),
                      rel_diff(acoustic_sound_speed(a), s.c)});
  }
  CHECK(worst <= 1e-12);
}

TEST_CASE("acoustic pair of a divergence-free state at rest") {
  const Grid g(32, 2.0 * M_PI);
  FlowState s{leray_P(random_vector(g, 8)), SpectralField::zeros(g), 0.1, 0.2, 0.0};
  const AcousticPair a = make_acoustic(s);
  CHECK(testing::max_abs(a.gamma.x.modes) <= 1e-14);
  CHECK(testing::max_abs(a.upsilon.modes) <= 1e-14);
}

TEST_CASE("free propagation is unitary and periodic per mode") {
  const Grid g(32, 2.0 * M_PI);
  const SpectralField u = random_field(g, 4);
  const SpectralField w = free_propagate(u, 0.37, 0.1);
  CHECK(l2_norm_spectral(w) == doctest::Approx(l2_norm_spectral(u)).epsilon(1e-13));
  CHECK(rel_diff(free_propagate(w, -0.37, 0.1), u) <= 1e-13);
  CHECK(rel_diff(free_propagate(free_propagate(u, 0.2, 0.1), 0.17, 0.1), w) <= 1e-12);

  // A single mode at |k| = 5 returns after t = 2 pi eps / 5.
  SpectralField m = SpectralField::zeros(g);
  m.modes(5, 0) = 1.0;
  const double eps = 0.05;
  CHECK(std::abs(free_propagate(m, 2.0 * M_PI * eps / 5.0, eps).modes(5, 0) - 1.0) <= 1e-13);
  CHECK(std::abs(free_propagate(m, M_PI * eps / 5.0, eps).modes(5, 0) + 1.0) <= 1e-13);
  CHECK(free_propagate(u, 0.0, eps).modes.isApprox(u.modes, 0.0));
}

TEST_CASE("Strichartz exponents") {
  auto e = strichartz_exponents(kInf);
  CHECK(e.r == 4.0);
  CHECK(e.decay == 0.25);
  e = strichartz_exponents(2.0);
  CHECK(std::isinf(e.r));
  CHECK(e.decay == 0.0);
  e = strichartz_exponents(4.0);
  CHECK(e.r == doctest::Approx(8.0));
  CHECK(e.decay == doctest::Approx(0.125));
  e = strichartz_exponents(10.0);
  CHECK(e.r == doctest::Approx(5.0));
  CHECK(e.decay == doctest::Approx(0.2));
  CHECK_THROWS(strichartz_exponents(1.5));
}

TEST_CASE("Strichartz measurement") {
  const Grid g(128, 16.0 * M_PI);
  const SpectralField b = bump(g, 2.0);
  const SpectralField comp[1] = {b};
  CHECK_THROWS(measure_strichartz(comp, 0.1, 0.0, kInf));
  CHECK_THROWS(measure_strichartz(comp, 0.1, 0.5, kInf, 32));

  // p = 2 has r = inf and the L^2 norm is conserved.
  const auto m2 = measure_strichartz(comp, 0.1, 0.5, 2.0);
  CHECK(m2.norm == doctest::Approx(l2_norm_spectral(b)).epsilon(1e-12));
  CHECK(m2.scaled == m2.norm);

  const auto coarse = measure_strichartz(comp, 0.1, 0.5, kInf);
  const auto fine = measure_strichartz(comp, 0.05, 0.5, kInf);
  CHECK(fine.norm < coarse.norm);
  CHECK(coarse.scaled == doctest::Approx(coarse.norm / std::pow(0.1, 0.25)));
  CHECK_FALSE(coarse.wraparound);
  CHECK(wraparound_time(g, 0.1) == doctest::Approx(0.45 * 16.0 * M_PI * 0.1));
  CHECK(measure_strichartz(comp, 0.01, 0.5, kInf, 64).wraparound);

  std::ostringstream out;
  const StrichartzMeasurement rows[2] = {coarse, fine};
  write_strichartz_csv(out, rows);
  CHECK(out.str().rfind("eps,T,p,r,norm,scaled,wraparound\n", 0) == 0);
}
