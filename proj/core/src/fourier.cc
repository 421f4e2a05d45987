#include "tdk/fourier.h"

#include <fftw3.h>

#include <cmath>
#include <stdexcept>

namespace tdk {

namespace {

// x_0 = -pi L_x turns the endpoint phase into (-1)^k on the spectral side;
// storage parity equals wavenumber parity because N is even.
inline double endpoint_sign(std::size_t storage_index) {
  return (storage_index & 1u) ? -1.0 : 1.0;
}

}  // namespace

Fourier::Fourier(const Grid& grid)
    : grid_(grid),
      line_in_(grid.n_modes()),
      line_out_(grid.n_modes()) {
  const int n = static_cast<int>(grid_.n_modes());
  // FFTW_ESTIMATE keeps plan creation deterministic and leaves the buffers
  // untouched during planning.
  plan_fwd_line_ = fftw_plan_dft_1d(
      n, reinterpret_cast<fftw_complex*>(line_in_.data()),
      reinterpret_cast<fftw_complex*>(line_out_.data()), FFTW_FORWARD,
      FFTW_ESTIMATE);
  plan_inv_line_ = fftw_plan_dft_1d(
      n, reinterpret_cast<fftw_complex*>(line_in_.data()),
      reinterpret_cast<fftw_complex*>(line_out_.data()), FFTW_BACKWARD,
      FFTW_ESTIMATE);
  if (plan_fwd_line_ == nullptr || plan_inv_line_ == nullptr)
    throw std::runtime_error("fourier: FFTW plan creation failed");
}

Fourier::~Fourier() {
  fftw_destroy_plan(static_cast<fftw_plan>(plan_fwd_line_));
  fftw_destroy_plan(static_cast<fftw_plan>(plan_inv_line_));
}

void Fourier::dft_lines(const complex* in, complex* out, std::size_t n_lines,
                        bool forward_dir) const {
  const std::size_t n = grid_.n_modes();
  const fftw_plan plan = static_cast<fftw_plan>(forward_dir ? plan_fwd_line_
                                                            : plan_inv_line_);
  // Lines are strided by n_lines (x-major physical layout and mode-major
  // spectral layout share that stride pattern along x / mode).
  for (std::size_t line = 0; line < n_lines; ++line) {
    for (std::size_t i = 0; i < n; ++i) line_in_[i] = in[i * n_lines + line];
    fftw_execute(plan);
    for (std::size_t i = 0; i < n; ++i) out[i * n_lines + line] = line_out_[i];
  }
}

void Fourier::forward(const std::vector<complex>& physical,
                      SpectralField& out) const {
  const std::size_t n = grid_.n_modes();
  const std::size_t ny = grid_.n_y();
  if (physical.size() != n * ny)
    throw std::invalid_argument("fourier: physical sample count mismatch");
  dft_lines(physical.data(), out.data(), ny, true);
  const double dx = grid_.dx();
  for (std::size_t i = 0; i < n; ++i) {
    const double scale = dx * endpoint_sign(i);
    complex* profile = out.profile(i);
    for (std::size_t j = 0; j < ny; ++j) profile[j] *= scale;
  }
}

void Fourier::forward(const std::vector<complex>& physical,
                      SurfaceSpectrum& out) const {
  const std::size_t n = grid_.n_modes();
  if (physical.size() != n)
    throw std::invalid_argument("fourier: physical sample count mismatch");
  for (std::size_t i = 0; i < n; ++i) line_in_[i] = physical[i];
  fftw_execute(static_cast<fftw_plan>(plan_fwd_line_));
  const double dx = grid_.dx();
  for (std::size_t i = 0; i < n; ++i)
    out[i] = dx * endpoint_sign(i) * line_out_[i];
}

void Fourier::inverse(const SpectralField& f,
                      std::vector<complex>& physical) const {
  const std::size_t n = grid_.n_modes();
  const std::size_t ny = grid_.n_y();
  physical.resize(n * ny);
  const double scale = grid_.dxi() / (2.0 * M_PI);
  scratch_c_.resize(n * ny);
  for (std::size_t i = 0; i < n; ++i) {
    const double s = scale * endpoint_sign(i);
    const complex* profile = f.profile(i);
    for (std::size_t j = 0; j < ny; ++j) scratch_c_[i * ny + j] = s * profile[j];
  }
  dft_lines(scratch_c_.data(), physical.data(), ny, false);
}

void Fourier::inverse(const SurfaceSpectrum& f,
                      std::vector<complex>& physical) const {
  const std::size_t n = grid_.n_modes();
  physical.resize(n);
  const double scale = grid_.dxi() / (2.0 * M_PI);
  for (std::size_t i = 0; i < n; ++i)
    line_in_[i] = scale * endpoint_sign(i) * f[i];
  fftw_execute(static_cast<fftw_plan>(plan_inv_line_));
  for (std::size_t i = 0; i < n; ++i) physical[i] = line_out_[i];
}

void Fourier::convolve(const SpectralField& f, const SpectralField& g,
                       SpectralField& out) const {
  SpectralField fd = f;
  SpectralField gd = g;
  dealias(grid_, fd);
  dealias(grid_, gd);
  inverse(fd, scratch_a_);
  inverse(gd, scratch_b_);
  for (std::size_t i = 0; i < scratch_a_.size(); ++i)
    scratch_a_[i] *= scratch_b_[i];
  forward(scratch_a_, out);
  dealias(grid_, out);
}

void Fourier::convolve(const SurfaceSpectrum& f, const SurfaceSpectrum& g,
                       SurfaceSpectrum& out) const {
  SurfaceSpectrum fd = f;
  SurfaceSpectrum gd = g;
  dealias(grid_, fd);
  dealias(grid_, gd);
  std::vector<complex> pf, pg;
  inverse(fd, pf);
  inverse(gd, pg);
  for (std::size_t i = 0; i < pf.size(); ++i) pf[i] *= pg[i];
  forward(pf, out);
  dealias(grid_, out);
}

void Fourier::convolve(const SurfaceSpectrum& f, const SpectralField& g,
                       SpectralField& out) const {
  SurfaceSpectrum fd = f;
  SpectralField gd = g;
  dealias(grid_, fd);
  dealias(grid_, gd);
  std::vector<complex> pf;
  inverse(fd, pf);
  inverse(gd, scratch_b_);
  const std::size_t ny = grid_.n_y();
  for (std::size_t i = 0; i < grid_.n_modes(); ++i)
    for (std::size_t j = 0; j < ny; ++j) scratch_b_[i * ny + j] *= pf[i];
  forward(scratch_b_, out);
  dealias(grid_, out);
}

void apply_multiplier(const Grid& grid, const std::function<complex(double)>& m,
                      SpectralField& f) {
  for (std::size_t i = 0; i < grid.n_modes(); ++i) {
    const complex factor = m(grid.xi(i));
    complex* profile = f.profile(i);
    for (std::size_t j = 0; j < grid.n_y(); ++j) profile[j] *= factor;
  }
}

void apply_multiplier(const Grid& grid, const std::function<complex(double)>& m,
                      SurfaceSpectrum& f) {
  for (std::size_t i = 0; i < grid.n_modes(); ++i) f[i] *= m(grid.xi(i));
}

void dealias(const Grid& grid, SpectralField& f) {
  for (std::size_t i = 0; i < grid.n_modes(); ++i) {
    if (grid.retained(i)) continue;
    complex* profile = f.profile(i);
    for (std::size_t j = 0; j < grid.n_y(); ++j) profile[j] = 0.0;
  }
}

void dealias(const Grid& grid, SurfaceSpectrum& f) {
  for (std::size_t i = 0; i < grid.n_modes(); ++i)
    if (!grid.retained(i)) f[i] = 0.0;
}

void ddx(const Grid& grid, const SpectralField& f, SpectralField& out) {
  for (std::size_t i = 0; i < grid.n_modes(); ++i) {
    const complex factor(0.0, grid.xi(i));
    const complex* src = f.profile(i);
    complex* dst = out.profile(i);
    for (std::size_t j = 0; j < grid.n_y(); ++j) dst[j] = factor * src[j];
  }
}

void ddx(const Grid& grid, const SurfaceSpectrum& f, SurfaceSpectrum& out) {
  for (std::size_t i = 0; i < grid.n_modes(); ++i)
    out[i] = complex(0.0, grid.xi(i)) * f[i];
}

}  // namespace tdk
