#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include "machlab/field.hpp"

namespace machlab {

struct BesovProfile;

/// Radial low-frequency cutoff: exactly 1 for r <= 3/4, exactly 0 for
/// r >= 4/3, C-infinity and nonincreasing in between.
double chi_profile(double r);

/// Shell profile phi(r) = chi(r/2) - chi(r), supported in [3/4, 8/3].
double phi_profile(double r);

/// Dyadic partition of unity sampled on a grid.
///
/// Block q = -1 is chi(|k|); block q >= 0 is phi(2^-q |k|).  q_max is the last
/// shell whose support reaches below the dealias cutoff, so the blocks sum to
/// one on every retained mode.
struct DyadicPartition {
  Grid grid;
  int q_max = 0;
  std::vector<Eigen::ArrayXXd> blocks;  // blocks[q + 1]

  const Eigen::ArrayXXd& block(int q) const { return blocks.at(static_cast<size_t>(q + 1)); }
  int shell_count() const noexcept { return q_max + 2; }
};

/// Throws std::invalid_argument when no shell q >= 0 fits below the cutoff.
DyadicPartition build_partition(const Grid& grid);

/// Cached partition per grid; safe to call from several threads.
const DyadicPartition& partition_for(const Grid& grid);

/// Delta_q u for q in [-1, q_max].
SpectralField delta_q(const DyadicPartition& part, const SpectralField& u, int q);
/// S_q u = sum_{p <= q-1} Delta_p u for q in [-1, q_max + 1] (S_{-1} = 0).
SpectralField s_q(const DyadicPartition& part, const SpectralField& u, int q);

/// ||Delta_q u||_{L^p} for q = -1..q_max (index q + 1), of the pointwise
/// Euclidean magnitude of the components.  p = 2 is evaluated from the
/// coefficients; other exponents use one inverse transform per shell and
/// component, shared across all requested exponents.
std::vector<std::vector<double>> shell_norms(const DyadicPartition& part,
                                             std::span<const SpectralField> components,
                                             std::span<const double> exponents);
std::vector<double> shell_norms(const DyadicPartition& part,
                                std::span<const SpectralField> components, double p);

/// l^r norm of (weight(q) 2^{qs} shells[q+1]) over q = -1..; weights may be empty.
double besov_from_shells(std::span<const double> shells, double s, double r,
                         std::span<const double> weights = {});

double besov_norm(const DyadicPartition& part, std::span<const SpectralField> components,
                  double s, double p, double r);
double besov_norm(const SpectralField& u, double s, double p, double r);
double besov_norm(const VectorField& v, double s, double p, double r);

double besov_norm_hetero(const DyadicPartition& part, std::span<const SpectralField> components,
                         double s, double p, double r, const BesovProfile& profile);
double besov_norm_hetero(const SpectralField& u, double s, double p, double r,
                         const BesovProfile& profile);

/// CSV with one row per distinct grid |k| up to the dealias cutoff:
/// wavenumber, chi, phi_0, ..., phi_qmax.
void write_partition_csv(std::ostream& out, const DyadicPartition& part);

}  // namespace machlab
