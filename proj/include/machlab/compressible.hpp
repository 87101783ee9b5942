#pragma once

#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

#include "machlab/ledger.hpp"
#include "machlab/profile.hpp"
#include "machlab/state.hpp"

namespace machlab {

struct StepperConfig {
  double cfl = 0.4;
  double max_dt = 0.01;
  /// When positive every step uses exactly this dt (clipped at output times).
  double fixed_dt = 0.0;
  double blowup_grad = 1e4;
  double blowup_besov = 1e8;
  bool dealias_every_step = true;

  // Test hooks.
  bool nonlinear = true;
  bool acoustic = true;
  /// Replace (f, g) by (P f, 0): with c = 0 and div-free data the velocity
  /// then follows incompressible Euler.
  bool project_nonlinear = false;
};

void validate_config(const StepperConfig& cfg);

struct NonlinearRhs {
  VectorField f;
  SpectralField g;
};

/// f = -v.grad v - gamma_bar c grad c, g = -v.grad c - gamma_bar c div v,
/// products in real space, dealiased.
NonlinearRhs rhs_nonlinear(const FlowState& s);

/// Exact flow of the linear acoustic part over dt (any sign).
FlowState acoustic_exact_step(const FlowState& s, double dt);

/// Advective CFL step: min(max_dt, cfl h / (|v|_inf + gamma_bar |c|_inf + tiny)).
double stable_dt(const FlowState& s, const StepperConfig& cfg);

/// One Strang step of size dt: A(dt/2) RK4(dt) A(dt/2).  Throws Blowup when
/// the result is not finite.
FlowState step(const FlowState& s, const StepperConfig& cfg, double dt);
FlowState step(const FlowState& s, const StepperConfig& cfg);

class Blowup : public std::runtime_error {
 public:
  Blowup(const std::string& what, double time) : std::runtime_error(what), time_(time) {}
  double time() const noexcept { return time_; }

 private:
  double time_;
};

struct RunOptions {
  /// Times (in (0, T]) that the stepper lands on exactly; the observer is
  /// called at t = 0 and at each of them.
  std::vector<double> output_times;
  std::function<void(const FlowState&)> observer;
  /// Adds the b2_21_psi column.
  std::optional<BesovProfile> profile;
  /// Diagnostics every this many steps (and always at the last one).
  int diag_stride = 1;
};

/// Column names of the compressible ledger, in order.
std::vector<std::string> compressible_columns(bool with_profile);

/// Steps from initial.time to initial.time + T, appending a diagnostics row
/// per (strided) step to `ledger`, which is reset first.  On a non-finite
/// state or a threshold crossing the ledger keeps every row so far and
/// Blowup is thrown.
FlowState run(const FlowState& initial, double T, const StepperConfig& cfg, RunLedger& ledger,
              const RunOptions& options = {});

}  // namespace machlab
