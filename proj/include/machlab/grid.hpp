#pragma once

#include <memory>

#include <Eigen/Dense>

namespace machlab {

/// Uniform periodic n x n grid on the square [0, L)^2.
///
/// Mode arrays are indexed (jx, jy) with the usual FFT ordering: index j maps
/// to the signed integer j for j < n/2 and j - n otherwise.  Physical
/// wavenumbers are signed indices times 2*pi/L.
class Grid {
 public:
  Grid(int n, double box_length);

  int n() const noexcept { return n_; }
  double length() const noexcept { return length_; }
  double spacing() const noexcept { return length_ / n_; }
  double cell_area() const noexcept { return spacing() * spacing(); }
  double fundamental() const noexcept;

  /// Radial 2/3-rule cutoff: (2/3) * (n/2) * (2*pi/L).
  double dealias_cutoff() const noexcept;

  int signed_index(int j) const noexcept { return j < n_ / 2 ? j : j - n_; }
  double wavenumber(int j) const noexcept { return fundamental() * signed_index(j); }

  const Eigen::ArrayXXd& kx() const noexcept;
  const Eigen::ArrayXXd& ky() const noexcept;
  const Eigen::ArrayXXd& kabs() const noexcept;
  const Eigen::ArrayXXd& ksq() const noexcept;

  /// Wavenumbers used for spectral derivatives; zero on the Nyquist line so
  /// that derivatives of real fields stay real.
  const Eigen::ArrayXXd& kx_deriv() const noexcept;
  const Eigen::ArrayXXd& ky_deriv() const noexcept;

  /// 1 where |k| <= dealias_cutoff(), 0 elsewhere.
  const Eigen::ArrayXXd& dealias_mask() const noexcept;

  /// Sample coordinates x_j = j * spacing().
  Eigen::ArrayXd coordinates() const;

  friend bool operator==(const Grid& a, const Grid& b) noexcept {
    return a.n_ == b.n_ && a.length_ == b.length_;
  }

 private:
  struct Tables;
  int n_;
  double length_;
  std::shared_ptr<const Tables> tables_;
};

}  // namespace machlab
