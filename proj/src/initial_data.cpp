#include "machlab/initial_data.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "machlab/littlewood_paley.hpp"
#include "machlab/norms.hpp"
#include "machlab/operators.hpp"

namespace machlab {

namespace {

// Minimum-image squared distance on the periodic box.
double dist2(double x, double y, double cx, double cy, double L) {
  double dx = std::remainder(x - cx, L);
  double dy = std::remainder(y - cy, L);
  return dx * dx + dy * dy;
}

struct Blob {
  double x, y, sign;
};

SpectralField gaussian_sum(const Grid& g, const std::vector<Blob>& blobs, double width) {
  const Eigen::ArrayXd xs = g.coordinates();
  RealSamples f = RealSamples::Zero(g.n(), g.n());
  for (int jy = 0; jy < g.n(); ++jy) {
    for (int jx = 0; jx < g.n(); ++jx) {
      double s = 0.0;
      for (const auto& b : blobs) {
        s += b.sign * std::exp(-dist2(xs(jx), xs(jy), b.x, b.y, g.length()) / (2.0 * width * width));
      }
      f(jx, jy) = s;
    }
  }
  SpectralField u = real_part(fft_forward(g, f));
  u.modes(0, 0) = 0.0;
  dealias(u);
  return u;
}

VectorField vortices(const std::string& name, double amplitude, double width, const Grid& g) {
  const double L = g.length();
  std::vector<Blob> blobs;
  if (name == "vortex-pair") {
    const double d = 1.5 * width;
    blobs = {{0.5 * L - d, 0.5 * L, 1.0}, {0.5 * L + d, 0.5 * L, -1.0}};
  } else {
    blobs = {{0.25 * L, 0.25 * L, 1.0},
             {0.75 * L, 0.25 * L, -1.0},
             {0.25 * L, 0.75 * L, -1.0},
             {0.75 * L, 0.75 * L, 1.0}};
  }
  SpectralField omega = gaussian_sum(g, blobs, width);
  omega = amplitude * omega;
  return perp_grad(inv_laplacian(omega));
}

// Gaussian pulse at the box centre: Qv = grad phi and c, normalised so that
// ||div Qv||_inf + ||grad c||_inf equals `size`.
std::pair<VectorField, SpectralField> pulse(double size, double width, const Grid& g) {
  const double L = g.length();
  const std::vector<Blob> centre = {{0.5 * L, 0.5 * L, 1.0}};
  const SpectralField bump = gaussian_sum(g, centre, width);
  VectorField qv = grad(bump);
  SpectralField c = bump;
  const double d = lp_norm(div(qv), kInf);
  const double gc = lp_norm(grad(c), kInf);
  if (d + gc == 0.0) return {qv, c};
  // Split evenly between the velocity and sound-speed parts.
  qv = cplx(0.5 * size / d) * qv;
  c = cplx(0.5 * size / gc) * c;
  return {qv, c};
}

FlowState random_band_fields(const DataSpec& spec, double rate, const Grid& g) {
  if (!(rate > 0.0)) throw std::invalid_argument("random-band: rate must be positive");
  const DyadicPartition& part = partition_for(g);
  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<SpectralField> comps(3, SpectralField::zeros(g));
  for (auto& comp : comps) {
    RealSamples noise(g.n(), g.n());
    for (Eigen::Index j = 0; j < noise.size(); ++j) noise(j) = normal(rng);
    const SpectralField white = real_part(fft_forward(g, noise));
    for (int q = -1; q <= part.q_max; ++q) {
      SpectralField shell = delta_q(part, white, q);
      shell.modes(0, 0) = 0.0;
      const double norm = l2_norm_spectral(shell);
      if (norm == 0.0) continue;
      const double target = spec.amplitude * std::pow(2.0, -2.0 * q) * std::pow(rate, -q);
      comp.modes += (target / norm) * shell.modes;
    }
    dealias(comp);
  }
  return {{comps[0], comps[1]}, comps[2]};
}

}  // namespace

VectorField vortical_part(const DataSpec& spec, const Grid& grid) {
  const std::string kind = spec.name == "vortex-pair-ill" ? "vortex-pair" : "array";
  return vortices(kind, spec.amplitude, spec.width, grid);
}

FlowState make_initial_data(const DataSpec& spec, const Grid& grid, double eps,
                            double gamma_bar) {
  FlowState s{VectorField::zeros(grid), SpectralField::zeros(grid), eps, gamma_bar, 0.0};
  if (spec.name.rfind("random-band:", 0) == 0) {
    const std::string arg = spec.name.substr(12);
    double rate = 0.0;
    try {
      rate = std::stod(arg);
    } catch (const std::exception&) {
      throw std::invalid_argument("random-band: bad rate '" + arg + "'");
    }
    FlowState r = random_band_fields(spec, rate, grid);
    s.v = r.v;
    s.c = r.c;
  } else if (spec.name == "taylor-green-ill" || spec.name == "vortex-pair-ill" ||
             spec.name == "well-prepared-contrast") {
    const double size = spec.name == "well-prepared-contrast" ? eps * spec.acoustic : spec.acoustic;
    const auto [qv, c] = pulse(size, spec.width, grid);
    s.v = vortical_part(spec, grid) + qv;
    s.c = c;
  } else {
    throw std::invalid_argument("unknown initial data '" + spec.name +
                                "' (expected taylor-green-ill, vortex-pair-ill, random-band:rate, "
                                "well-prepared-contrast)");
  }
  dealias(s.v);
  dealias(s.c);
  validate_state(s);
  return s;
}

}  // namespace machlab
