#pragma once

#include "machlab/field.hpp"

namespace machlab {

// Spectral differential operators.  All are Fourier multipliers, so they keep
// the dealias flag of their input.

VectorField grad(const SpectralField& u);
SpectralField div(const VectorField& v);
/// Scalar vorticity d1 v2 - d2 v1.
SpectralField curl2d(const VectorField& v);
/// Perpendicular gradient (-d2 u, d1 u).
VectorField perp_grad(const SpectralField& u);
SpectralField partial_x(const SpectralField& u);
SpectralField partial_y(const SpectralField& u);

SpectralField laplacian(const SpectralField& u);

/// Inverse Laplacian in the mean-free gauge: the zero mode of the result is
/// zero.  A nonzero input mean is discarded with a warning.
SpectralField inv_laplacian(const SpectralField& u);

/// |D|^{-1} = (-Laplacian)^{-1/2}, zero mode mapped to zero.
SpectralField inv_abs_d(const SpectralField& u);

/// Leray projector onto divergence-free fields and its complement
/// Q v = grad inv_laplacian div v.  leray_P(v) is computed as v - leray_Q(v).
VectorField leray_P(const VectorField& v);
VectorField leray_Q(const VectorField& v);

/// Multiplies every mode by a real radial/array multiplier.
SpectralField apply_multiplier(const SpectralField& u, const Eigen::ArrayXXd& m);

/// Warnings (e.g. mean projection in inv_laplacian) go to std::clog unless
/// silenced.
void set_warnings_enabled(bool enabled);
void warn(const char* message);

}  // namespace machlab
