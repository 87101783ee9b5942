#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "machlab/calibration.hpp"
#include "machlab/field.hpp"
#include "machlab/ledger.hpp"

namespace machlab {

/// Velocity and its gradient at one point.
struct VelocitySample {
  double u = 0.0, v = 0.0;
  double ux = 0.0, uy = 0.0, vx = 0.0, vy = 0.0;
  double div() const noexcept { return ux + vy; }
};

/// Closed-form velocity field built from a '+'-separated list of terms, with
/// integer wavenumber indices m (physical wavenumber m * 2 pi / L):
///   zero
///   shear:A:m            (A sin(k y), A sin(k x)), divergence free
///   mono:A:m1:m2:Omega   A sin(Omega t) (k/|k|) cos(k.x), a pure gradient
///   expand:d             (d/2) (x - L/2, y - L/2), uniform divergence d, not periodic
class SyntheticVelocity {
 public:
  static SyntheticVelocity parse(const std::string& spec, double box_length);

  VelocitySample operator()(double t, double x, double y) const;

  const std::string& name() const noexcept { return name_; }
  bool periodic() const noexcept { return periodic_; }
  bool divergence_free() const noexcept { return divergence_free_; }

  /// Upper bound for |v| over the box and all times.
  double speed_bound() const;

  /// Grid samples of the two components at time t.
  void sample(const Grid& grid, double t, RealSamples& u, RealSamples& v) const;

 private:
  struct Term {
    enum class Kind { shear, mono, expand } kind;
    double a = 0.0, kx = 0.0, ky = 0.0, omega = 0.0;
  };
  std::string name_;
  double length_ = 0.0;
  std::vector<Term> terms_;
  bool periodic_ = true;
  bool divergence_free_ = true;
};

struct TransportOptions {
  double cfl = 0.4;
  double max_dt = 0.01;
  int diag_stride = 1;
};

/// Columns: t, f_inf, f_b0_inf1, f_mass, grad_v_inf, div_v_inf, div_b12_41,
/// div_b1_21, int_grad_v, int_div_b12_4.
std::vector<std::string> transport_columns();

/// RK4 on d_t f = -div(f v) with v sampled at the stage times.  Returns f(T).
SpectralField solve_transport_spectral(const SpectralField& f0, const SyntheticVelocity& vel,
                                       double T, RunLedger& ledger,
                                       const TransportOptions& options = {});

/// Backward characteristics from every grid point with `substeps` RK4 steps,
/// cubic Lagrange interpolation of the f0 samples at the foot, times
/// exp(-int div v) along the path.  Returns real-space samples of f(T).
RealSamples solve_transport_oracle(const Grid& grid, const RealSamples& f0,
                                   const SyntheticVelocity& vel, double T, int substeps);

/// Periodic tensor-product cubic Lagrange interpolation of grid samples.
double interpolate_cubic(const RealSamples& f, double spacing, double x, double y);

struct LogEstimateReport {
  std::vector<double> t, lhs, rhs, ratio;
  double C = 0.0;
  double worst_ratio = 0.0;
  bool pass = false;
  /// Same with the divergence term dropped: C ||f0|| (1 + int |grad v|).
  std::vector<double> linear_rhs;
};

/// RHS(t) = C ||f0||_{B0} (1 + e^{C int|grad v|} (int ||div v||_{B^{1/2}_{4,1}})^2)
///          (1 + int |grad v|).  Throws std::out_of_range on missing columns.
LogEstimateReport check_log_estimate(const RunLedger& ledger, double C);

/// Smallest C making the estimate hold along the whole ledger.
double fit_log_estimate(const RunLedger& ledger);

/// Columns t, linf_distance, lhs, rhs, ratio.
void write_log_estimate_csv(std::ostream& out, const LogEstimateReport& report,
                            const std::vector<double>& distance);

}  // namespace machlab
