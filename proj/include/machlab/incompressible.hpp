#pragma once

#include <functional>
#include <vector>

#include "machlab/field.hpp"
#include "machlab/ledger.hpp"

namespace machlab {

/// Vorticity of the reference incompressible flow (mean-free).
struct IncompressibleState {
  SpectralField omega;
  double time = 0.0;
};

/// Biot-Savart on the torus: v = perp_grad(inv_laplacian(omega)).
VectorField velocity_from_vorticity(const SpectralField& omega);

struct IncompressibleConfig {
  double cfl = 0.4;
  double max_dt = 0.01;
  double fixed_dt = 0.0;
};

/// -v.grad omega with dealiased products.
SpectralField vorticity_rhs(const SpectralField& omega);

/// One RK4 step.  Throws std::runtime_error on a non-finite result.
IncompressibleState step_incompressible(const IncompressibleState& s, double dt);
double stable_dt(const IncompressibleState& s, const IncompressibleConfig& cfg);

struct IncompressibleRunOptions {
  std::vector<double> output_times;
  std::function<void(const IncompressibleState&)> observer;
  int diag_stride = 1;
};

/// Columns: t, omega_inf, omega_l2, energy_l2, omega_b0_inf1, grad_v_inf, int_grad_v.
std::vector<std::string> incompressible_columns();

IncompressibleState run_incompressible(const IncompressibleState& initial, double T,
                                       const IncompressibleConfig& cfg, RunLedger& ledger,
                                       const IncompressibleRunOptions& options = {});

}  // namespace machlab
