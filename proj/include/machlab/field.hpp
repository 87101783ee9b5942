#pragma once

#include <complex>

#include <Eigen/Dense>

#include "machlab/grid.hpp"

namespace machlab {

using cplx = std::complex<double>;
using RealSamples = Eigen::ArrayXXd;
using ComplexSamples = Eigen::ArrayXXcd;
using Modes = Eigen::ArrayXXcd;

/// A periodic field carried by its Fourier coefficients.
///
/// Coefficients are normalised so that a constant field c has zero mode c and
/// cos(2*pi*x/L) has two modes of value 1/2.  Fields that are real in space
/// have conjugate-symmetric modes; the complex acoustic quantities do not.
struct SpectralField {
  Grid grid;
  Modes modes;
  /// Set when every mode above Grid::dealias_cutoff() is exactly zero.
  bool dealiased = false;

  static SpectralField zeros(const Grid& g) {
    return {g, Modes::Zero(g.n(), g.n()), true};
  }
};

struct VectorField {
  SpectralField x;
  SpectralField y;

  static VectorField zeros(const Grid& g) {
    return {SpectralField::zeros(g), SpectralField::zeros(g)};
  }
  const Grid& grid() const noexcept { return x.grid; }
  bool dealiased() const noexcept { return x.dealiased && y.dealiased; }
};

SpectralField operator+(const SpectralField& a, const SpectralField& b);
SpectralField operator-(const SpectralField& a, const SpectralField& b);
SpectralField operator-(const SpectralField& a);
SpectralField operator*(cplx s, const SpectralField& a);
VectorField operator+(const VectorField& a, const VectorField& b);
VectorField operator-(const VectorField& a, const VectorField& b);
VectorField operator*(cplx s, const VectorField& a);

/// Forward transform of real or complex samples indexed (ix, iy).
SpectralField fft_forward(const Grid& grid, const RealSamples& samples);
SpectralField fft_forward(const Grid& grid, const ComplexSamples& samples);

/// Inverse transform; the real version discards the (round-off) imaginary part.
RealSamples fft_inverse(const SpectralField& field);
ComplexSamples fft_inverse_complex(const SpectralField& field);

/// Two real fields through one complex transform each way.
void fft_inverse_pair(const SpectralField& a, const SpectralField& b, RealSamples& ra,
                      RealSamples& rb);
void fft_forward_pair(const Grid& grid, const RealSamples& ra, const RealSamples& rb,
                      SpectralField& a, SpectralField& b);

/// Zeroes every mode with |k| > K_max and sets the flag.
void dealias(SpectralField& field);
void dealias(VectorField& field);

/// Fields whose real-space samples are Re u and Im u of the input.
SpectralField real_part(const SpectralField& u);
SpectralField imag_part(const SpectralField& u);

/// Largest |u(k) - conj(u(-k))| over all modes, relative to the largest mode.
double conjugate_asymmetry(const SpectralField& field);

}  // namespace machlab
