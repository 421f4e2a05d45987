#include "tdk/field.h"

#include <cmath>
#include <stdexcept>

namespace tdk {

namespace {

void check_same_shape(std::size_t a, std::size_t b) {
  if (a != b) throw std::invalid_argument("field: shape mismatch");
}

}  // namespace

SpectralField& SpectralField::operator+=(const SpectralField& other) {
  check_same_shape(data_.size(), other.data_.size());
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
  return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& other) {
  check_same_shape(data_.size(), other.data_.size());
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
  return *this;
}

SpectralField& SpectralField::operator*=(complex scale) {
  for (auto& v : data_) v *= scale;
  return *this;
}

SurfaceSpectrum& SurfaceSpectrum::operator+=(const SurfaceSpectrum& other) {
  check_same_shape(data_.size(), other.data_.size());
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
  return *this;
}

SurfaceSpectrum& SurfaceSpectrum::operator-=(const SurfaceSpectrum& other) {
  check_same_shape(data_.size(), other.data_.size());
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
  return *this;
}

SurfaceSpectrum& SurfaceSpectrum::operator*=(complex scale) {
  for (auto& v : data_) v *= scale;
  return *this;
}

double max_abs(const SpectralField& f) {
  double m = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i)
    m = std::max(m, std::abs(f.data()[i]));
  return m;
}

double max_abs(const SurfaceSpectrum& f) {
  double m = 0.0;
  for (std::size_t i = 0; i < f.n_modes(); ++i)
    m = std::max(m, std::abs(f[i]));
  return m;
}

bool has_non_finite(const SpectralField& f) {
  for (std::size_t i = 0; i < f.size(); ++i) {
    const complex& v = f.data()[i];
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return true;
  }
  return false;
}

bool has_non_finite(const SurfaceSpectrum& f) {
  for (std::size_t i = 0; i < f.n_modes(); ++i) {
    const complex& v = f[i];
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return true;
  }
  return false;
}

void enforce_hermitian(const Grid& grid, SpectralField& f) {
  const std::size_t n = grid.n_modes();
  const std::size_t ny = grid.n_y();
  for (std::size_t j = 0; j < ny; ++j) {
    f(0, j) = complex(f(0, j).real(), 0.0);
    f(n / 2, j) = 0.0;
  }
  for (std::size_t i = 1; i < n / 2; ++i) {
    const std::size_t c = n - i;
    for (std::size_t j = 0; j < ny; ++j) {
      complex avg = 0.5 * (f(i, j) + std::conj(f(c, j)));
      f(i, j) = avg;
      f(c, j) = std::conj(avg);
    }
  }
}

void enforce_hermitian(const Grid& grid, SurfaceSpectrum& f) {
  const std::size_t n = grid.n_modes();
  f[0] = complex(f[0].real(), 0.0);
  f[n / 2] = 0.0;
  for (std::size_t i = 1; i < n / 2; ++i) {
    const std::size_t c = n - i;
    complex avg = 0.5 * (f[i] + std::conj(f[c]));
    f[i] = avg;
    f[c] = std::conj(avg);
  }
}

double hermitian_defect(const Grid& grid, const SpectralField& f) {
  const std::size_t n = grid.n_modes();
  double worst = 0.0;
  for (std::size_t j = 0; j < grid.n_y(); ++j) {
    worst = std::max(worst, std::abs(f(0, j).imag()));
    worst = std::max(worst, std::abs(f(n / 2, j)));
  }
  for (std::size_t i = 1; i < n / 2; ++i)
    for (std::size_t j = 0; j < grid.n_y(); ++j)
      worst = std::max(worst, std::abs(f(n - i, j) - std::conj(f(i, j))));
  return worst;
}

double hermitian_defect(const Grid& grid, const SurfaceSpectrum& f) {
  const std::size_t n = grid.n_modes();
  double worst = std::max(std::abs(f[0].imag()), std::abs(f[n / 2]));
  for (std::size_t i = 1; i < n / 2; ++i)
    worst = std::max(worst, std::abs(f[n - i] - std::conj(f[i])));
  return worst;
}

}  // namespace tdk
