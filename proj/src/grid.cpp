#include "machlab/grid.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace machlab {

struct Grid::Tables {
  Eigen::ArrayXXd kx, ky, kabs, ksq, kx_deriv, ky_deriv, mask;
};

namespace {

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

}  // namespace

Grid::Grid(int n, double box_length) : n_(n), length_(box_length) {
  if (n < 8 || !is_power_of_two(n)) {
    throw std::invalid_argument("grid size must be a power of two >= 8, got " +
                                std::to_string(n));
  }
  if (!(box_length > 0.0) || !std::isfinite(box_length)) {
    throw std::invalid_argument("box length must be positive and finite");
  }

  auto t = std::make_shared<Tables>();
  t->kx.resize(n, n);
  t->ky.resize(n, n);
  t->kx_deriv.resize(n, n);
  t->ky_deriv.resize(n, n);
  const double k0 = fundamental();
  for (int jy = 0; jy < n; ++jy) {
    for (int jx = 0; jx < n; ++jx) {
      t->kx(jx, jy) = k0 * signed_index(jx);
      t->ky(jx, jy) = k0 * signed_index(jy);
      t->kx_deriv(jx, jy) = jx == n / 2 ? 0.0 : t->kx(jx, jy);
      t->ky_deriv(jx, jy) = jy == n / 2 ? 0.0 : t->ky(jx, jy);
    }
  }
  t->ksq = t->kx.square() + t->ky.square();
  t->kabs = t->ksq.sqrt();
  const double cutoff = dealias_cutoff();
  t->mask = (t->kabs <= cutoff).cast<double>();
  tables_ = std::move(t);
}

double Grid::fundamental() const noexcept {
  return 2.0 * std::numbers::pi / length_;
}

double Grid::dealias_cutoff() const noexcept {
  return (2.0 / 3.0) * (n_ / 2) * fundamental();
}

const Eigen::ArrayXXd& Grid::kx() const noexcept { return tables_->kx; }
const Eigen::ArrayXXd& Grid::ky() const noexcept { return tables_->ky; }
const Eigen::ArrayXXd& Grid::kabs() const noexcept { return tables_->kabs; }
const Eigen::ArrayXXd& Grid::ksq() const noexcept { return tables_->ksq; }
const Eigen::ArrayXXd& Grid::kx_deriv() const noexcept { return tables_->kx_deriv; }
const Eigen::ArrayXXd& Grid::ky_deriv() const noexcept { return tables_->ky_deriv; }
const Eigen::ArrayXXd& Grid::dealias_mask() const noexcept { return tables_->mask; }

Eigen::ArrayXd Grid::coordinates() const {
  Eigen::ArrayXd x(n_);
  for (int j = 0; j < n_; ++j) x(j) = j * spacing();
  return x;
}

}  // namespace machlab
