#pragma once

#include "machlab/field.hpp"

namespace machlab {

/// Velocity and rescaled sound-speed perturbation of the low Mach system at
/// one instant.
struct FlowState {
  VectorField v;
  SpectralField c;
  double eps = 1.0;
  double gamma_bar = 0.2;
  double time = 0.0;

  const Grid& grid() const noexcept { return c.grid; }
};

/// Throws std::invalid_argument unless eps is in (0, 1], gamma_bar > 0 and
/// the three components share one grid.
void validate_state(const FlowState& s);

}  // namespace machlab
