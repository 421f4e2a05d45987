#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "tdk/grid.h"

namespace tdk {

using complex = std::complex<double>;

/// Fourier-in-x coefficients of a function of (x, y): one complex y-profile
/// per tangential mode, stored mode-major so a profile is contiguous.
class SpectralField {
public:
  SpectralField() = default;
  explicit SpectralField(const Grid& grid)
      : n_modes_(grid.n_modes()), n_y_(grid.n_y()),
        data_(grid.n_modes() * grid.n_y()) {}
  SpectralField(std::size_t n_modes, std::size_t n_y)
      : n_modes_(n_modes), n_y_(n_y), data_(n_modes * n_y) {}

  std::size_t n_modes() const { return n_modes_; }
  std::size_t n_y() const { return n_y_; }
  std::size_t size() const { return data_.size(); }

  complex& operator()(std::size_t mode, std::size_t j) {
    return data_[mode * n_y_ + j];
  }
  const complex& operator()(std::size_t mode, std::size_t j) const {
    return data_[mode * n_y_ + j];
  }

  complex* profile(std::size_t mode) { return data_.data() + mode * n_y_; }
  const complex* profile(std::size_t mode) const {
    return data_.data() + mode * n_y_;
  }

  complex* data() { return data_.data(); }
  const complex* data() const { return data_.data(); }

  void fill(complex value) { data_.assign(data_.size(), value); }

  SpectralField& operator+=(const SpectralField& other);
  SpectralField& operator-=(const SpectralField& other);
  SpectralField& operator*=(complex scale);

private:
  std::size_t n_modes_ = 0;
  std::size_t n_y_ = 0;
  std::vector<complex> data_;
};

/// Fourier coefficients of a function of x alone (the displacement A and
/// other boundary traces).
class SurfaceSpectrum {
public:
  SurfaceSpectrum() = default;
  explicit SurfaceSpectrum(const Grid& grid) : data_(grid.n_modes()) {}
  explicit SurfaceSpectrum(std::size_t n_modes) : data_(n_modes) {}

  std::size_t n_modes() const { return data_.size(); }

  complex& operator[](std::size_t mode) { return data_[mode]; }
  const complex& operator[](std::size_t mode) const { return data_[mode]; }

  complex* data() { return data_.data(); }
  const complex* data() const { return data_.data(); }

  void fill(complex value) { data_.assign(data_.size(), value); }

  SurfaceSpectrum& operator+=(const SurfaceSpectrum& other);
  SurfaceSpectrum& operator-=(const SurfaceSpectrum& other);
  SurfaceSpectrum& operator*=(complex scale);

private:
  std::vector<complex> data_;
};

/// Largest |coefficient| over all modes and heights.
double max_abs(const SpectralField& f);
double max_abs(const SurfaceSpectrum& f);

/// True if any coefficient is NaN or infinite.
bool has_non_finite(const SpectralField& f);
bool has_non_finite(const SurfaceSpectrum& f);

/// Enforces f_{-k} = conj(f_k) by averaging conjugate pairs; zeroes the
/// Nyquist mode and the imaginary part of mode zero.
void enforce_hermitian(const Grid& grid, SpectralField& f);
void enforce_hermitian(const Grid& grid, SurfaceSpectrum& f);

/// Largest violation of the Hermitian pairing, |f_{-k} - conj(f_k)|.
double hermitian_defect(const Grid& grid, const SpectralField& f);
double hermitian_defect(const Grid& grid, const SurfaceSpectrum& f);

}  // namespace tdk
