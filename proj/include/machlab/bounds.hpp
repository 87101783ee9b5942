#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "machlab/calibration.hpp"
#include "machlab/ledger.hpp"
#include "machlab/profile.hpp"

namespace machlab {

struct LifespanModel {
  BesovProfile profile;
  double alpha = 0.0;
  double beta = 1.0;  // min(1, 1/alpha), 1 when alpha = 0
  double C0 = 1.0;
  double eta = 0.0;
};

/// alpha from the profile's growth exponent; throws unless C0 > 0.
LifespanModel make_lifespan_model(BesovProfile profile, double C0 = 1.0);

/// Psi(log(eps^{-1/8}))^{-beta}, natural log.  Throws unless eps in (0,1).
double phi_of_eps(const LifespanModel& model, double eps);

struct LifespanPrediction {
  /// (1/C0) log log Psi(log(1/eps)); 0 with defined = false when Psi < e.
  double T = 0.0;
  bool defined = false;
  /// From exp(exp(C0 T)) = Phi(eps)^{-1/2}; 0 with defined = false when
  /// Phi^{-1/2} < e.
  double T_phi = 0.0;
  bool phi_defined = false;
  /// T_phi / T when both are defined and T > 0, else NaN.
  double ratio = 0.0;
};

LifespanPrediction lifespan_prediction(const LifespanModel& model, double eps);

/// ceil(log2(1/eps) / 8).
int cutoff_N(double eps);

/// One member of an eps sweep.
struct SweepRun {
  double eps = 0.0;
  int n = 0;
  double length = 0.0;
  double T = 0.0;
  RunLedger ledger;
};

struct AcousticDecayRow {
  double eps = 0.0;
  double l1_div_gradc = 0.0;  // || (div v, grad c) ||_{L^1_T L^inf}
  double l4_qv_c = 0.0;       // || (Qv, c) ||_{L^4_T L^inf}
  double l4_scaled = 0.0;     // l4_qv_c / eps^{1/4}
  double bound_l1 = 0.0;      // applied C0 * Phi^{1/4}(eps)
  double bound_l4 = 0.0;      // applied C0 * Phi(eps)
};

struct AcousticDecayReport {
  std::vector<AcousticDecayRow> rows;  // decreasing eps
  bool monotone_l1 = false;
  bool monotone_l4 = false;
  /// max/min of l4_scaled over the sweep.
  double scaled_spread = 0.0;
  InequalityReport bound_l1;
  InequalityReport bound_l4;
  /// Least-squares slope of log l1 against log eps.
  double eta_fit = 0.0;
};

/// Throws std::invalid_argument on mismatched grids or end times.
AcousticDecayReport check_acoustic_decay(std::span<const SweepRun> runs, const LifespanModel& model);
void write_acoustic_decay_csv(std::ostream& out, const AcousticDecayReport& rep);

/// Time series of w = P v_eps - v against the reference run.
struct LimitSeries {
  double eps = 0.0;
  std::vector<double> t;
  std::vector<double> l2;
  std::vector<double> b2;
  std::vector<double> b2_psi;  // empty without a comparison profile
  double initial_gap = 0.0;    // || P v_{0,eps} - v_0 ||_{L^2}
};

struct TimedField {
  double t = 0.0;
  VectorField v;
};

/// Pairs snapshots by index; throws std::invalid_argument when the counts or
/// times differ.
LimitSeries limit_series(double eps, std::span<const TimedField> projected,
                         std::span<const TimedField> reference,
                         const std::optional<BesovProfile>& comparison = std::nullopt);

struct LimitRow {
  double eps = 0.0;
  double sup_l2 = 0.0;
  double sup_b2 = 0.0;
  double sup_b2_psi = 0.0;
};

struct IncompressibleLimitReport {
  std::vector<LimitRow> rows;  // decreasing eps
  bool monotone_l2 = false;
  bool monotone_b2 = false;
  /// smallest-eps sup_l2 over largest-eps sup_l2.
  double reduction = 0.0;
  InequalityReport rate_bound;
};

IncompressibleLimitReport check_incompressible_limit(std::span<const LimitSeries> series,
                                                     const LifespanModel& model);
void write_incompressible_limit_csv(std::ostream& out, const IncompressibleLimitReport& rep);

/// lhs = ||grad v||_inf, rhs = ||v||_2 + ||div v||_{B0} + ||omega||_{B0}.
struct GradientSplitData {
  std::vector<double> lhs;
  std::vector<double> rhs;
};
GradientSplitData gradient_split_from_ledger(const RunLedger& ledger);
GradientSplitData gradient_split_from_field(const VectorField& v);

InequalityReport check_gradient_split(const GradientSplitData& calibration,
                                      std::span<const GradientSplitData> holdouts);

/// ||(v,c)(t)||_2 <= ||(v,c)(0)||_2 exp(C int ||div v||_inf).
BoundCheck energy_bound(const RunLedger& ledger);
/// ||(v,c)(t)||_{B^{2,Psi}_{2,1}} <= C ||(v,c)(0)|| exp(C V(t)).
BoundCheck hetero_energy_bound(const RunLedger& ledger);
/// ||omega(t)||_{B0} <= C ||omega_0||_{B0} (1 + int ||grad v||_inf).
BoundCheck vorticity_growth_bound(const RunLedger& ledger);

}  // namespace machlab
