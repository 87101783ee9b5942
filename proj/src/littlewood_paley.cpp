#include "machlab/littlewood_paley.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <ostream>
#include <stdexcept>

#include "machlab/norms.hpp"
#include "machlab/profile.hpp"

namespace machlab {

namespace {

constexpr double kInner = 3.0 / 4.0;
constexpr double kOuter = 4.0 / 3.0;

// exp(-1/t) for t > 0, exactly 0 otherwise.
double flat_exp(double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; }

// C-infinity step from 0 (t <= 0) to 1 (t >= 1).
double smooth_step(double t) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  const double a = flat_exp(t);
  const double b = flat_exp(1.0 - t);
  return a / (a + b);
}

Eigen::ArrayXXd radial(const Grid& grid, double scale, double (*f)(double)) {
  const Eigen::ArrayXXd& kabs = grid.kabs();
  Eigen::ArrayXXd out(kabs.rows(), kabs.cols());
  for (Eigen::Index j = 0; j < kabs.size(); ++j) {
    const double v = f(kabs(j) * scale);
    out(j) = v < 1e-300 ? 0.0 : v;
  }
  return out;
}

}  // namespace

double chi_profile(double r) { return 1.0 - smooth_step((r - kInner) / (kOuter - kInner)); }

double phi_profile(double r) { return chi_profile(0.5 * r) - chi_profile(r); }

DyadicPartition build_partition(const Grid& grid) {
  const double cutoff = grid.dealias_cutoff();
  if (kInner >= cutoff) {
    throw std::invalid_argument("grid too coarse: no dyadic shell fits below the dealias cutoff");
  }
  DyadicPartition part{grid, 0, {}};
  // Largest q whose annulus [3/4 2^q, 8/3 2^q] starts below the cutoff.
  while (kInner * std::ldexp(1.0, part.q_max + 1) < cutoff) ++part.q_max;
  part.blocks.reserve(static_cast<size_t>(part.q_max + 2));
  part.blocks.push_back(radial(grid, 1.0, chi_profile));
  for (int q = 0; q <= part.q_max; ++q) {
    part.blocks.push_back(radial(grid, std::ldexp(1.0, -q), phi_profile));
  }
  return part;
}

const DyadicPartition& partition_for(const Grid& grid) {
  static std::mutex mutex;
  static std::map<std::pair<int, double>, std::unique_ptr<DyadicPartition>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[{grid.n(), grid.length()}];
  if (!slot) slot = std::make_unique<DyadicPartition>(build_partition(grid));
  return *slot;
}

SpectralField delta_q(const DyadicPartition& part, const SpectralField& u, int q) {
  if (q < -1 || q > part.q_max) throw std::out_of_range("delta_q: shell index out of range");
  return {u.grid, u.modes * part.block(q), u.dealiased};
}

SpectralField s_q(const DyadicPartition& part, const SpectralField& u, int q) {
  if (q < -1 || q > part.q_max + 1) throw std::out_of_range("s_q: shell index out of range");
  Eigen::ArrayXXd m = Eigen::ArrayXXd::Zero(u.grid.n(), u.grid.n());
  for (int p = -1; p <= q - 1; ++p) m += part.block(p);
  return {u.grid, u.modes * m, u.dealiased};
}

std::vector<std::vector<double>> shell_norms(const DyadicPartition& part,
                                             std::span<const SpectralField> components,
                                             std::span<const double> exponents) {
  std::vector<std::vector<double>> out(exponents.size(),
                                       std::vector<double>(static_cast<size_t>(part.shell_count())));
  const bool need_space =
      std::any_of(exponents.begin(), exponents.end(), [](double p) { return p != 2.0; });
  const double area = part.grid.cell_area();
  for (int q = -1; q <= part.q_max; ++q) {
    const auto& m = part.block(q);
    const size_t idx = static_cast<size_t>(q + 1);
    RealSamples mag2;
    if (need_space) mag2 = RealSamples::Zero(part.grid.n(), part.grid.n());
    double spectral_sq = 0.0;
    for (const auto& c : components) {
      const Modes shell = c.modes * m;
      for (Eigen::Index j = 0; j < shell.size(); ++j) spectral_sq += std::norm(shell(j));
      if (need_space) mag2 += fft_inverse_complex({c.grid, shell, c.dealiased}).abs2();
    }
    RealSamples mag;
    if (need_space) mag = mag2.sqrt();
    for (size_t e = 0; e < exponents.size(); ++e) {
      out[e][idx] = exponents[e] == 2.0 ? part.grid.length() * std::sqrt(spectral_sq)
                                        : lp_norm(mag, area, exponents[e]);
    }
  }
  return out;
}

std::vector<double> shell_norms(const DyadicPartition& part,
                                std::span<const SpectralField> components, double p) {
  const double ps[1] = {p};
  return shell_norms(part, components, ps)[0];
}

double besov_from_shells(std::span<const double> shells, double s, double r,
                         std::span<const double> weights) {
  double acc = 0.0;
  for (size_t i = 0; i < shells.size(); ++i) {
    const int q = static_cast<int>(i) - 1;
    double term = std::pow(2.0, q * s) * shells[i];
    if (!weights.empty()) term *= weights[i];
    if (std::isinf(r)) {
      acc = std::max(acc, term);
    } else if (r == 1.0) {
      acc += term;
    } else {
      acc += std::pow(term, r);
    }
  }
  if (std::isinf(r) || r == 1.0) return acc;
  return std::pow(acc, 1.0 / r);
}

double besov_norm(const DyadicPartition& part, std::span<const SpectralField> components,
                  double s, double p, double r) {
  return besov_from_shells(shell_norms(part, components, p), s, r);
}

double besov_norm(const SpectralField& u, double s, double p, double r) {
  return besov_norm(partition_for(u.grid), std::span<const SpectralField>(&u, 1), s, p, r);
}

double besov_norm(const VectorField& v, double s, double p, double r) {
  const SpectralField c[2] = {v.x, v.y};
  return besov_norm(partition_for(v.grid()), c, s, p, r);
}

double besov_norm_hetero(const DyadicPartition& part, std::span<const SpectralField> components,
                         double s, double p, double r, const BesovProfile& profile) {
  std::vector<double> w(static_cast<size_t>(part.shell_count()));
  for (int q = -1; q <= part.q_max; ++q) w[static_cast<size_t>(q + 1)] = profile.at(q);
  return besov_from_shells(shell_norms(part, components, p), s, r, w);
}

double besov_norm_hetero(const SpectralField& u, double s, double p, double r,
                         const BesovProfile& profile) {
  return besov_norm_hetero(partition_for(u.grid), std::span<const SpectralField>(&u, 1), s, p, r,
                           profile);
}

void write_partition_csv(std::ostream& out, const DyadicPartition& part) {
  out << "wavenumber,chi";
  for (int q = 0; q <= part.q_max; ++q) out << ",phi_" << q;
  out << '\n';
  std::vector<double> radii;
  const Eigen::ArrayXXd& kabs = part.grid.kabs();
  for (Eigen::Index j = 0; j < kabs.size(); ++j) {
    if (kabs(j) <= part.grid.dealias_cutoff()) radii.push_back(kabs(j));
  }
  std::sort(radii.begin(), radii.end());
  radii.erase(std::unique(radii.begin(), radii.end()), radii.end());
  out.precision(17);
  for (double k : radii) {
    out << k << ',' << chi_profile(k);
    for (int q = 0; q <= part.q_max; ++q) out << ',' << phi_profile(std::ldexp(k, -q));
    out << '\n';
  }
}

}  // namespace machlab
