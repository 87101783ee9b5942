#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include "machlab/state.hpp"

namespace machlab {

/// Complex acoustic quantities of a flow state.
///
/// gamma = Qv - i grad |D|^{-1} c and upsilon = |D|^{-1} div v + i c, both
/// complex in real space.  Their real and imaginary parts recover Qv and c.
struct AcousticPair {
  VectorField gamma;
  SpectralField upsilon;
  double eps = 1.0;
};

AcousticPair make_acoustic(const FlowState& state);

/// Recovers (Qv, c) from a pair: Qv = Re gamma, c = Im upsilon.
VectorField acoustic_velocity(const AcousticPair& pair);
SpectralField acoustic_sound_speed(const AcousticPair& pair);

/// Free half-wave evolution: mode k multiplied by exp(-i t |k| / eps).
SpectralField free_propagate(const SpectralField& psi, double t, double eps);
VectorField free_propagate(const VectorField& psi, double t, double eps);

struct StrichartzExponents {
  double r;      // time exponent, infinite at p = 2
  double decay;  // power of eps in the estimate
};

/// r = 4 + 8/(p-2) and decay = 1/4 - 1/(2p); p = inf gives (4, 1/4).
StrichartzExponents strichartz_exponents(double p);

struct StrichartzMeasurement {
  double eps = 0.0;
  double T = 0.0;
  double p = 0.0;
  double r = 0.0;
  double norm = 0.0;
  double scaled = 0.0;  // norm / eps^decay
  /// Set when T reaches past 0.45 L eps, after which waves wrap around the box.
  bool wraparound = false;
};

/// Wraparound guard: 0.45 * L * eps.
double wraparound_time(const Grid& grid, double eps);

/// L^r_T L^p norm of |free_propagate(psi, t, eps)| from `samples` uniform
/// snapshots on [0, T] (samples >= 64).  Throws on T <= 0.
StrichartzMeasurement measure_strichartz(std::span<const SpectralField> initial, double eps,
                                         double T, double p, int samples = 128);

/// Columns eps,T,p,r,norm,scaled,wraparound.
void write_strichartz_csv(std::ostream& out, std::span<const StrichartzMeasurement> rows);

}  // namespace machlab
