#include <cstring>
#include <map>
#include <mutex>
#include <stdexcept>
#include <utility>

#include <fftw3.h>

#include "machlab/field.hpp"

namespace machlab {

namespace {

// FFTW planning is not thread-safe; execution on distinct buffers is.
std::mutex plan_mutex;

struct Buffer {
  fftw_complex* data = nullptr;
  int n = 0;
  ~Buffer() {
    if (data) fftw_free(data);
  }
};

fftw_complex* scratch(int n) {
  thread_local Buffer buffer;
  if (buffer.n != n) {
    if (buffer.data) fftw_free(buffer.data);
    buffer.data = fftw_alloc_complex(static_cast<size_t>(n) * n);
    buffer.n = n;
  }
  return buffer.data;
}

fftw_plan plan_for(int n, int sign) {
  static std::map<std::pair<int, int>, fftw_plan> plans;
  std::lock_guard lock(plan_mutex);
  auto key = std::make_pair(n, sign);
  if (auto it = plans.find(key); it != plans.end()) return it->second;
  // ESTIMATE planning never times kernels, so the chosen algorithm and hence
  // the rounding pattern is identical from run to run.
  fftw_complex* tmp = fftw_alloc_complex(static_cast<size_t>(n) * n);
  fftw_plan p = fftw_plan_dft_2d(n, n, tmp, tmp, sign, FFTW_ESTIMATE);
  fftw_free(tmp);
  if (!p) throw std::runtime_error("FFTW planning failed");
  plans.emplace(key, p);
  return p;
}

void execute(int n, int sign, cplx* data) {
  fftw_complex* buf = scratch(n);
  const size_t bytes = sizeof(cplx) * static_cast<size_t>(n) * n;
  std::memcpy(buf, data, bytes);
  fftw_execute_dft(plan_for(n, sign), buf, buf);
  std::memcpy(static_cast<void*>(data), buf, bytes);
}

void check_shape(const Grid& grid, Eigen::Index rows, Eigen::Index cols) {
  if (rows != grid.n() || cols != grid.n()) {
    throw std::invalid_argument("sample array does not match the grid size");
  }
}

}  // namespace

SpectralField fft_forward(const Grid& grid, const ComplexSamples& samples) {
  check_shape(grid, samples.rows(), samples.cols());
  Modes modes = samples;
  execute(grid.n(), FFTW_FORWARD, modes.data());
  modes /= static_cast<double>(grid.n()) * grid.n();
  return {grid, std::move(modes), false};
}

SpectralField fft_forward(const Grid& grid, const RealSamples& samples) {
  check_shape(grid, samples.rows(), samples.cols());
  return fft_forward(grid, ComplexSamples(samples.cast<cplx>()));
}

ComplexSamples fft_inverse_complex(const SpectralField& field) {
  ComplexSamples out = field.modes;
  execute(field.grid.n(), FFTW_BACKWARD, out.data());
  return out;
}

RealSamples fft_inverse(const SpectralField& field) {
  return fft_inverse_complex(field).real();
}

void dealias(SpectralField& field) {
  field.modes *= field.grid.dealias_mask();
  field.dealiased = true;
}

void dealias(VectorField& field) {
  dealias(field.x);
  dealias(field.y);
}

double conjugate_asymmetry(const SpectralField& field) {
  const int n = field.grid.n();
  double worst = 0.0;
  double scale = 0.0;
  for (int jy = 0; jy < n; ++jy) {
    for (int jx = 0; jx < n; ++jx) {
      const cplx a = field.modes(jx, jy);
      const cplx b = field.modes((n - jx) % n, (n - jy) % n);
      worst = std::max(worst, std::abs(a - std::conj(b)));
      scale = std::max(scale, std::abs(a));
    }
  }
  return scale > 0.0 ? worst / scale : 0.0;
}

namespace {

// Modes of (u + sign * conj(u)) / 2 in real space.
Modes symmetrize(const Modes& m, double sign) {
  const auto n = m.rows();
  Modes out(n, n);
  for (Eigen::Index jy = 0; jy < n; ++jy) {
    for (Eigen::Index jx = 0; jx < n; ++jx) {
      out(jx, jy) = 0.5 * (m(jx, jy) + sign * std::conj(m((n - jx) % n, (n - jy) % n)));
    }
  }
  return out;
}

}  // namespace

void fft_inverse_pair(const SpectralField& a, const SpectralField& b, RealSamples& ra,
                      RealSamples& rb) {
  SpectralField z{a.grid, a.modes + cplx{0.0, 1.0} * b.modes, false};
  const ComplexSamples s = fft_inverse_complex(z);
  ra = s.real();
  rb = s.imag();
}

void fft_forward_pair(const Grid& grid, const RealSamples& ra, const RealSamples& rb,
                      SpectralField& a, SpectralField& b) {
  check_shape(grid, ra.rows(), ra.cols());
  ComplexSamples z(ra.rows(), ra.cols());
  z.real() = ra;
  z.imag() = rb;
  const SpectralField zf = fft_forward(grid, z);
  a = real_part(zf);
  b = imag_part(zf);
}

SpectralField real_part(const SpectralField& u) {
  return {u.grid, symmetrize(u.modes, 1.0), u.dealiased};
}

SpectralField imag_part(const SpectralField& u) {
  return {u.grid, cplx{0.0, -1.0} * symmetrize(u.modes, -1.0), u.dealiased};
}

SpectralField operator+(const SpectralField& a, const SpectralField& b) {
  return {a.grid, a.modes + b.modes, a.dealiased && b.dealiased};
}

SpectralField operator-(const SpectralField& a, const SpectralField& b) {
  return {a.grid, a.modes - b.modes, a.dealiased && b.dealiased};
}

SpectralField operator-(const SpectralField& a) {
  return {a.grid, -a.modes, a.dealiased};
}

SpectralField operator*(cplx s, const SpectralField& a) {
  return {a.grid, s * a.modes, a.dealiased};
}

VectorField operator+(const VectorField& a, const VectorField& b) {
  return {a.x + b.x, a.y + b.y};
}

VectorField operator-(const VectorField& a, const VectorField& b) {
  return {a.x - b.x, a.y - b.y};
}

VectorField operator*(cplx s, const VectorField& a) { return {s * a.x, s * a.y}; }

}  // namespace machlab
