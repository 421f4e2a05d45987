#include "tdk/ydiff.h"

#include <stdexcept>

namespace tdk {

namespace {

void check_shape(const Grid& grid, const SpectralField& f) {
  if (f.n_modes() != grid.n_modes() || f.n_y() != grid.n_y())
    throw std::invalid_argument("ydiff: field shape does not match grid");
}

}  // namespace

void ddy(const Grid& grid, const SpectralField& f, SpectralField& out) {
  check_shape(grid, f);
  const std::size_t ny = grid.n_y();
  const double h = grid.dy();
  for (std::size_t i = 0; i < grid.n_modes(); ++i) {
    const complex* u = f.profile(i);
    complex* d = out.profile(i);
    d[0] = (-1.5 * u[0] + 2.0 * u[1] - 0.5 * u[2]) / h;
    for (std::size_t j = 1; j + 1 < ny; ++j)
      d[j] = (u[j + 1] - u[j - 1]) / (2.0 * h);
    d[ny - 1] = (1.5 * u[ny - 1] - 2.0 * u[ny - 2] + 0.5 * u[ny - 3]) / h;
  }
}

void d2dy2(const Grid& grid, const SpectralField& f, SpectralField& out) {
  check_shape(grid, f);
  const std::size_t ny = grid.n_y();
  const double h2 = grid.dy() * grid.dy();
  for (std::size_t i = 0; i < grid.n_modes(); ++i) {
    const complex* u = f.profile(i);
    complex* d = out.profile(i);
    d[0] = (2.0 * u[0] - 5.0 * u[1] + 4.0 * u[2] - u[3]) / h2;
    for (std::size_t j = 1; j + 1 < ny; ++j)
      d[j] = (u[j + 1] - 2.0 * u[j] + u[j - 1]) / h2;
    d[ny - 1] =
        (2.0 * u[ny - 1] - 5.0 * u[ny - 2] + 4.0 * u[ny - 3] - u[ny - 4]) / h2;
  }
}

void numerov_d2dy2(const Grid& grid, const SpectralField& f,
                   SpectralField& out) {
  check_shape(grid, f);
  const std::size_t ny = grid.n_y();
  const std::size_t n_int = ny - 2;
  const double h2 = grid.dy() * grid.dy();

  // Thomas factorization of the constant tridiagonal mass matrix
  // (1/12, 10/12, 1/12); shared by every mode.
  std::vector<double> denom(n_int), upper(n_int);
  {
    double d = 10.0 / 12.0;
    denom[0] = d;
    upper[0] = (1.0 / 12.0) / d;
    for (std::size_t j = 1; j < n_int; ++j) {
      d = 10.0 / 12.0 - (1.0 / 12.0) * upper[j - 1];
      denom[j] = d;
      upper[j] = (1.0 / 12.0) / d;
    }
  }

  std::vector<complex> rhs(n_int);
  for (std::size_t i = 0; i < grid.n_modes(); ++i) {
    const complex* u = f.profile(i);
    complex* o = out.profile(i);
    for (std::size_t j = 0; j < n_int; ++j)
      rhs[j] = (u[j + 2] - 2.0 * u[j + 1] + u[j]) / h2;
    rhs[0] /= denom[0];
    for (std::size_t j = 1; j < n_int; ++j)
      rhs[j] = (rhs[j] - (1.0 / 12.0) * rhs[j - 1]) / denom[j];
    for (std::size_t j = n_int - 1; j-- > 0;)
      rhs[j] -= upper[j] * rhs[j + 1];
    o[0] = 0.0;
    for (std::size_t j = 0; j < n_int; ++j) o[j + 1] = rhs[j];
    o[ny - 1] = 0.0;
  }
}

void integrate_y(const Grid& grid, const SpectralField& f, SpectralField& out) {
  check_shape(grid, f);
  const std::size_t ny = grid.n_y();
  const double h = grid.dy();
  for (std::size_t i = 0; i < grid.n_modes(); ++i) {
    const complex* u = f.profile(i);
    complex* acc = out.profile(i);
    complex running = 0.0;
    acc[0] = 0.0;
    for (std::size_t j = 1; j < ny; ++j) {
      running += 0.5 * h * (u[j - 1] + u[j]);
      acc[j] = running;
    }
  }
}

void integrate_y_full(const Grid& grid, const SpectralField& f,
                      SurfaceSpectrum& out) {
  check_shape(grid, f);
  const std::size_t ny = grid.n_y();
  const double h = grid.dy();
  for (std::size_t i = 0; i < grid.n_modes(); ++i) {
    const complex* u = f.profile(i);
    complex total = 0.0;
    for (std::size_t j = 1; j < ny; ++j) total += 0.5 * h * (u[j - 1] + u[j]);
    out[i] = total;
  }
}

}  // namespace tdk
