#include <doctest.h>

#include <cmath>
#include <sstream>
#include <vector>

#include "helpers.hpp"
#include "machlab/calibration.hpp"
#include "machlab/littlewood_paley.hpp"
#include "machlab/norms.hpp"
#include "machlab/operators.hpp"
#include "machlab/profile.hpp"

using namespace machlab;
using machlab::testing::random_field;
using machlab::testing::rel_diff;
using machlab::testing::sample;

namespace {

// amplitude * cos(2 pi m x / L), set directly on the coefficients.
SpectralField mode(const Grid& g, int m, double amplitude = 1.0) {
  SpectralField u = SpectralField::zeros(g);
  u.modes(m, 0) = 0.5 * amplitude;
  u.modes(g.n() - m, 0) = 0.5 * amplitude;
  return u;
}

// Real field with random coefficients on |k| <= kmax fixed by the integer
// wavenumber, so the same function is sampled at every resolution.
SpectralField smooth_random(const Grid& g, std::uint64_t seed, int kmax) {
  SpectralField u = SpectralField::zeros(g);
  for (int my = -kmax; my <= kmax; ++my) {
    for (int mx = -kmax; mx <= kmax; ++mx) {
      if (mx * mx + my * my > kmax * kmax || (mx == 0 && my == 0)) continue;
      const std::uint64_t h = seed * 1000003u + static_cast<std::uint64_t>((mx + 100) * 1000 + my + 100);
      std::mt19937_64 rng(h);
      std::normal_distribution<double> normal(0.0, 1.0);
      const double re = normal(rng), im = normal(rng);
      // Assign k and -k consistently: only the lexicographically positive half draws.
      if (my < 0 || (my == 0 && mx < 0)) continue;
      const cplx c(re, im);
      const int jx = (mx + g.n()) % g.n(), jy = (my + g.n()) % g.n();
      u.modes(jx, jy) = c;
      u.modes((g.n() - jx) % g.n(), (g.n() - jy) % g.n()) = std::conj(c);
    }
  }
  u.dealiased = true;
  return u;
}

SpectralField product(const SpectralField& a, const SpectralField& b) {
  SpectralField p = real_part(fft_forward(a.grid, RealSamples(fft_inverse(a) * fft_inverse(b))));
  dealias(p);
  return p;
}

}  // namespace

TEST_CASE("cutoff profiles") {
  CHECK(chi_profile(0.0) == 1.0);
  CHECK(chi_profile(0.75) == 1.0);
  CHECK(chi_profile(4.0 / 3.0) == 0.0);
  CHECK(chi_profile(2.0) == 0.0);
  for (double r = 0.0; r < 3.0; r += 0.01) {
    CHECK(chi_profile(r + 0.01) <= chi_profile(r));
    CHECK(phi_profile(r) >= 0.0);
  }
  CHECK(phi_profile(0.74) == 0.0);
  CHECK(phi_profile(8.0 / 3.0) == 0.0);
  CHECK(phi_profile(1.4) == 1.0);
}

TEST_CASE("partition of unity and support disjointness") {
  const Grid g(256, 16.0 * M_PI);
  const DyadicPartition part = build_partition(g);
  CHECK(part.q_max == 3);
  double worst = 0.0;
  const Eigen::ArrayXXd& kabs = g.kabs();
  for (Eigen::Index j = 0; j < kabs.size(); ++j) {
    if (kabs(j) > g.dealias_cutoff()) continue;
    double s = 0.0;
    for (int q = -1; q <= part.q_max; ++q) s += part.block(q)(j);
    worst = std::max(worst, std::abs(s - 1.0));
  }
  CHECK(worst <= 1e-12);
  CHECK((part.block(0) * part.block(2)).abs().maxCoeff() == 0.0);
  for (int q = 1; q <= part.q_max; ++q) CHECK((part.block(-1) * part.block(q)).maxCoeff() == 0.0);
  for (int p = -1; p <= part.q_max; ++p)
    for (int q = p + 2; q <= part.q_max; ++q) CHECK((part.block(p) * part.block(q)).maxCoeff() == 0.0);

  CHECK(build_partition(Grid(256, 2.0 * M_PI)).q_max == 6);
  CHECK_THROWS_AS(build_partition(Grid(8, 100.0)), std::invalid_argument);
}

TEST_CASE("shell operators") {
  const Grid g(64, 2.0 * M_PI);
  const DyadicPartition& part = partition_for(g);
  // |k| = 11 sits where phi(2^-3 .) is exactly one.
  const SpectralField u = mode(g, 11);
  CHECK(rel_diff(delta_q(part, u, 3), u) == 0.0);
  for (int q : {-1, 0, 1}) CHECK(testing::max_abs(delta_q(part, u, q).modes) == 0.0);
  CHECK_THROWS_AS(delta_q(part, u, part.q_max + 1), std::out_of_range);

  const SpectralField r = random_field(g, 3);
  SpectralField sum = SpectralField::zeros(g);
  for (int q = -1; q <= part.q_max; ++q) sum = sum + delta_q(part, r, q);
  CHECK(rel_diff(sum, r) <= 1e-12);

  SpectralField tele = s_q(part, r, 3);
  for (int q = 3; q <= part.q_max; ++q) tele = tele + delta_q(part, r, q);
  CHECK(rel_diff(tele, r) <= 1e-12);
  CHECK(testing::max_abs(s_q(part, r, -1).modes) == 0.0);

  for (int p = -1; p <= part.q_max; ++p)
    for (int q = p + 2; q <= part.q_max; ++q)
      CHECK(testing::max_abs(delta_q(part, delta_q(part, r, q), p).modes) == 0.0);
}

TEST_CASE("Besov norm of single modes") {
  const Grid g(64, 2.0 * M_PI);
  CHECK(besov_norm(SpectralField::zeros(g), 2.0, 2.0, 1.0) == 0.0);
  // Unit L^2 cosine: amplitude sqrt(2)/L.
  const double amp = std::sqrt(2.0) / g.length();
  const SpectralField u16 = mode(g, 16, amp);
  CHECK(l2_norm_spectral(u16) == doctest::Approx(1.0).epsilon(1e-12));
  const double b = besov_norm(u16, 2.0, 2.0, 1.0);
  const double expected = 64.0 * phi_profile(2.0) + 256.0 * phi_profile(1.0);
  CHECK(b == doctest::Approx(expected).epsilon(1e-12));
  CHECK(256.0 / b >= 9.0 / 16.0);
  CHECK(256.0 / b <= 64.0 / 9.0);
  // |k| = 22 is interior to shell 4.
  CHECK(besov_norm(mode(g, 22, amp), 2.0, 2.0, 1.0) == doctest::Approx(256.0).epsilon(1e-12));
}

TEST_CASE("B0_22 is comparable with L2") {
  const Grid g(64, 2.0 * M_PI);
  for (int i = 0; i < 50; ++i) {
    const SpectralField u = random_field(g, 500 + i);
    const double ratio = besov_norm(u, 0.0, 2.0, 2.0) / l2_norm_spectral(u);
    CHECK(ratio >= 0.5);
    CHECK(ratio <= 2.0);
  }
}

TEST_CASE("heterogeneous norm reductions") {
  const Grid g(64, 2.0 * M_PI);
  const DyadicPartition& part = partition_for(g);
  const SpectralField u = random_field(g, 21);
  const BesovProfile one = make_named_profile("constant", part.q_max);
  for (double p : {2.0, 4.0, kInf}) {
    CHECK(besov_norm_hetero(u, 1.0, p, 1.0, one) == besov_norm(u, 1.0, p, 1.0));
  }
  const double alpha = 0.7;
  std::vector<double> w;
  for (int q = -1; q <= part.q_max; ++q) w.push_back(std::pow(2.0, alpha * q));
  const BesovProfile pow2 = validate_profile(w);
  for (double r : {1.0, 2.0, kInf}) {
    const double a = besov_norm_hetero(u, 0.5, 2.0, r, pow2);
    const double b = besov_norm(u, 0.5 + alpha, 2.0, r);
    CHECK(std::abs(a - b) <= 1e-12 * b);
  }
  CHECK(besov_norm_hetero(SpectralField::zeros(g), 1.0, 2.0, 1.0, pow2) == 0.0);
}

TEST_CASE("profile validation") {
  std::vector<double> poly, dec, dyadic;
  for (int q = -1; q <= 6; ++q) {
    poly.push_back(std::pow(q + 2.0, 1.5));
    dec.push_back(std::pow(2.0, -q));
    dyadic.push_back(std::pow(2.0, q));
  }
  const BesovProfile p = validate_profile(poly);
  CHECK(p.diverges);
  CHECK_THROWS_AS(validate_profile(dec), std::invalid_argument);
  CHECK_THROWS_AS(validate_profile({1.0, 0.0}), std::invalid_argument);
  const BesovProfile d = validate_profile(dyadic);
  CHECK(d.ratio_bound == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(d.growth_exponent == doctest::Approx(std::log(2.0)).epsilon(1e-14));
  for (int q = -1; q <= 6; ++q) {
    CHECK(d.values[q + 1] <= d.values[0] * std::exp(d.growth_exponent * (q + 1)) * (1 + 1e-14));
  }
  CHECK_FALSE(make_named_profile("constant", 10).diverges);
  CHECK(make_named_profile("exp:1", 5).growth_exponent == doctest::Approx(1.0));
  CHECK_THROWS(make_named_profile("cubic:2", 5));
  CHECK_THROWS(make_named_profile("power:x", 5));
}

TEST_CASE("profile data extension") {
  const BesovProfile p = validate_profile({1.0, 2.0, 4.0});
  CHECK(p.at(-1.0) == 1.0);
  CHECK(p.at(-0.5) == doctest::Approx(1.5));
  CHECK(p.at(1.0) == 4.0);
  CHECK(p.at(7.3) == 4.0);
  const BesovProfile e = make_named_profile("exp:1", 2);
  CHECK(e.at(7.5) == doctest::Approx(std::exp(7.5)));
}

TEST_CASE("profile text round trip") {
  const BesovProfile p = make_named_profile("power:2", 6);
  std::stringstream ss;
  write_profile(ss, p);
  const BesovProfile back = read_profile(ss);
  CHECK(back.values == p.values);
  std::stringstream bad("-1 1\n1 2\n");
  CHECK_THROWS(read_profile(bad));
}

TEST_CASE("find_profile closed forms") {
  // a_q = 2^{2q} ||Delta_q f|| = 4^{-q}: tails are geometric and Psi = 2^{q+1}.
  std::vector<double> a;
  for (int q = -1; q <= 8; ++q) a.push_back(std::pow(4.0, -q));
  const ProfileFit fit = find_profile_from_shells(a);
  for (int q = -1; q <= 8; ++q) CHECK(fit.profile.values[q + 1] == doctest::Approx(std::pow(2.0, q + 1)));
  CHECK(fit.profile.diverges);
  CHECK(fit.normalization <= 2.0);

  const ProfileFit single = find_profile_from_shells(std::vector<double>{0.0, 1.0, 0.0, 0.0, 0.0});
  CHECK(single.profile.values == std::vector<double>{1.0, 1.0, 2.0, 4.0, 8.0});
  CHECK(single.profile.ratio_bound == 2.0);
  CHECK(single.normalization == 1.0);

  const ProfileFit zero = find_profile_from_shells(std::vector<double>(5, 0.0));
  CHECK(zero.profile.degenerate);
  CHECK(zero.profile.values == std::vector<double>(5, 1.0));
}

TEST_CASE("find_profile on random fields passes validation") {
  const Grid g(64, 2.0 * M_PI);
  for (int i = 0; i < 50; ++i) {
    const ProfileFit fit = find_profile(random_field(g, 900 + i), 1.0, 2.0);
    CHECK_NOTHROW(validate_profile(fit.profile.values));
    CHECK(fit.normalization <= 2.0);
    CHECK(fit.weighted_norm >= fit.plain_norm);
  }
}

TEST_CASE("Bernstein inequalities") {
  const Grid g(64, 2.0 * M_PI);
  const DyadicPartition& part = partition_for(g);
  double lo = 1e300, hi = 0.0, inf_ratio = 0.0;
  for (int i = 0; i < 50; ++i) {
    const SpectralField u = random_field(g, 1300 + i);
    for (int q = 0; q <= part.q_max - 1; ++q) {
      const SpectralField d = delta_q(part, u, q);
      const VectorField gd = grad(d);
      for (double p : {2.0, kInf}) {
        const double base = lp_norm(d, p);
        if (base == 0.0) continue;
        const double ratio = lp_norm(gd, p) / (std::ldexp(1.0, q) * base);
        lo = std::min(lo, ratio);
        hi = std::max(hi, ratio);
      }
      inf_ratio = std::max(inf_ratio, lp_norm(d, kInf) / (std::ldexp(1.0, q) * lp_norm(d, 2.0)));
    }
  }
  MESSAGE("Bernstein gradient ratio range [" << lo << ", " << hi << "], sup/L2 constant " << inf_ratio);
  CHECK(lo >= 1.0 / 8.0);
  CHECK(hi <= 8.0);
  CHECK(inf_ratio <= 8.0);
}

TEST_CASE("embedding constant is stable under refinement") {
  double c[2] = {0.0, 0.0};
  int idx = 0;
  for (int n : {128, 256}) {
    const Grid g(n, 2.0 * M_PI);
    for (int i = 0; i < 10; ++i) {
      const SpectralField u = smooth_random(g, 40 + i, 12);
      c[idx] = std::max(c[idx], lp_norm(u, kInf) / besov_norm(u, 1.75, 2.0, 1.0));
    }
    ++idx;
  }
  MESSAGE("embedding constants " << c[0] << " " << c[1]);
  CHECK(c[1] / c[0] <= 2.0);
  CHECK(c[0] / c[1] <= 2.0);
}

TEST_CASE("product law with a fitted constant") {
  const Grid g(64, 2.0 * M_PI);
  std::vector<double> lhs, rhs;
  for (int i = 0; i < 50; ++i) {
    const SpectralField u = smooth_random(g, 3000 + 2 * i, 10);
    const SpectralField v = smooth_random(g, 3001 + 2 * i, 10);
    lhs.push_back(besov_norm(product(u, v), 0.0, kInf, 1.0));
    rhs.push_back(besov_norm(u, 0.5, 4.0, 1.0) * besov_norm(v, 0.0, kInf, 1.0));
  }
  const std::span<const double> l(lhs), r(rhs);
  const BoundCheck holdout = [&](double C) {
    return worst_linear_ratio(l.subspan(25), r.subspan(25), C);
  };
  const InequalityReport rep = calibrate_and_check(
      "product law", [&](double C) { return worst_linear_ratio(l.first(25), r.first(25), C); },
      std::span<const BoundCheck>(&holdout, 1));
  MESSAGE(rep.line());
  CHECK(rep.pass);
}

TEST_CASE("partition csv") {
  const Grid g(32, 2.0 * M_PI);
  std::ostringstream out;
  write_partition_csv(out, build_partition(g));
  const std::string s = out.str();
  CHECK(s.rfind("wavenumber,chi,phi_0", 0) == 0);
  CHECK(s.find("\n0,1,0") != std::string::npos);
}
