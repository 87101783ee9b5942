#pragma once

#include <cstdint>
#include <string>

#include "machlab/state.hpp"

namespace machlab {

/// Initial-data catalog entry.
///   taylor-green-ill        2x2 alternating Gaussian vortex array plus a
///                           Gaussian acoustic pulse (Qv and c) of size `acoustic`
///   vortex-pair-ill         counter-rotating Gaussian pair plus the same pulse
///   random-band:rate        random (v, c) with shell L^2 norms
///                           amplitude 2^{-2q} rate^{-q}
///   well-prepared-contrast  the taylor-green vortices with the pulse scaled by eps
struct DataSpec {
  std::string name = "taylor-green-ill";
  double amplitude = 1.0;  // peak vorticity of the vortices
  double acoustic = 0.25;  // ||div Qv0||_inf + ||grad c0||_inf of the pulse
  double width = 2.0;      // Gaussian width of vortices and pulse
  std::uint64_t seed = 1;
};

/// Deterministic in (spec, grid, eps).  Throws std::invalid_argument on an
/// unknown name.
FlowState make_initial_data(const DataSpec& spec, const Grid& grid, double eps,
                            double gamma_bar = 0.2);

/// The divergence-free part only (vortices), shared by every eps.
VectorField vortical_part(const DataSpec& spec, const Grid& grid);

}  // namespace machlab
