#include "tdk/reconstruct.h"

#include <cmath>
#include <stdexcept>

#include "tdk/weights.h"
#include "tdk/ydiff.h"

namespace tdk {

SurfaceSpectrum pressure_from_displacement(const Grid& grid,
                                           const SurfaceSpectrum& A) {
  if (A.n_modes() != grid.n_modes())
    throw std::invalid_argument("pressure_from_displacement: shape mismatch");
  SurfaceSpectrum out(grid);
  for (std::size_t i = 0; i < grid.n_modes(); ++i)
    out[i] = std::abs(grid.xi(i)) * A[i];
  return out;
}

namespace {

std::vector<double> linspace(double hi, std::size_t n) {
  std::vector<double> v(n);
  for (std::size_t k = 0; k < n; ++k)
    v[k] = hi * static_cast<double>(k) / static_cast<double>(n - 1);
  return v;
}

std::vector<double> real_parts(const std::vector<complex>& v) {
  std::vector<double> out(v.size());
  for (std::size_t k = 0; k < v.size(); ++k) out[k] = v[k].real();
  return out;
}

}  // namespace

DeckComposite reconstruct(const Fourier& fourier, const DeckState& state,
                          const BlasiusProfile& blasius, double nu,
                          const ReconstructOptions& options) {
  if (!(nu > 0.0 && nu < 1.0))
    throw std::invalid_argument("reconstruct: nu must lie in (0,1)");
  const Grid& grid = fourier.grid();
  const std::size_t n_x = grid.n_modes();
  const std::size_t n_y = grid.n_y();

  DeckComposite out;
  out.scalings.nu = nu;
  out.scalings.x_scale = std::pow(nu, 3.0 / 8.0);
  out.scalings.ybar_scale = std::pow(nu, 1.0 / 2.0);
  out.scalings.y_scale = std::pow(nu, 5.0 / 8.0);
  out.scalings.ytilde_scale = std::pow(nu, 3.0 / 8.0);
  out.scalings.t_scale = std::pow(nu, 1.0 / 4.0);
  out.scalings.u_main_pert = std::pow(nu, 1.0 / 8.0);
  out.scalings.uvp_quarter = std::pow(nu, 1.0 / 4.0);
  out.scalings.u_lower = std::pow(nu, 1.0 / 8.0);
  out.scalings.v_lower = std::pow(nu, 3.0 / 8.0);

  out.x.resize(n_x);
  for (std::size_t i = 0; i < n_x; ++i) out.x[i] = grid.x(i);
  out.y_lower = grid.y_nodes();
  out.ybar = linspace(options.ybar_max, options.n_ybar);
  out.ytilde = linspace(options.ytilde_max, options.n_ytilde);

  const SurfaceSpectrum pressure = pressure_from_displacement(grid, state.A);
  SurfaceSpectrum dxa(grid);
  ddx(grid, state.A, dxa);

  std::vector<complex> buf;
  fourier.inverse(state.A, buf);
  const std::vector<double> a_phys = real_parts(buf);
  fourier.inverse(dxa, buf);
  const std::vector<double> dxa_phys = real_parts(buf);
  fourier.inverse(pressure, buf);
  const std::vector<double> p_phys = real_parts(buf);

  // Main deck: displacement modulation of the base profile.
  const std::size_t n_ybar = options.n_ybar;
  out.u1.resize(n_x * n_ybar);
  out.v1.resize(n_x * n_ybar);
  out.p1.resize(n_x * n_ybar);
  for (std::size_t i = 0; i < n_x; ++i)
    for (std::size_t j = 0; j < n_ybar; ++j) {
      out.u1[i * n_ybar + j] = a_phys[i] * blasius.u_b_prime(out.ybar[j]);
      out.v1[i * n_ybar + j] = -dxa_phys[i] * blasius.u_b(out.ybar[j]);
      out.p1[i * n_ybar + j] = p_phys[i];
    }

  // Lower deck: the decomposition itself, V by exact continuity.
  {
    SpectralField pert(grid);
    for (std::size_t i = 0; i < n_x; ++i) {
      const double xi = grid.xi(i);
      complex* p = pert.profile(i);
      for (std::size_t j = 0; j < n_y; ++j)
        p[j] = state.wbar(i, j) +
               theta(xi, grid.y(j), state.t, state.eps) * state.A[i];
    }
    fourier.inverse(pert, buf);
    out.u_low.resize(n_x * n_y);
    for (std::size_t i = 0; i < n_x; ++i)
      for (std::size_t j = 0; j < n_y; ++j)
        out.u_low[i * n_y + j] = grid.y(j) + buf[i * n_y + j].real();

    SpectralField iw(grid);
    integrate_y(grid, state.wbar, iw);
    SpectralField vf(grid);
    for (std::size_t i = 0; i < n_x; ++i) {
      const double xi = grid.xi(i);
      complex* p = vf.profile(i);
      for (std::size_t j = 0; j < n_y; ++j) {
        const double y = grid.y(j);
        const double int_theta =
            y - int_one_minus_theta(xi, y, state.t, state.eps);
        p[j] = complex(0.0, -xi) * (iw(i, j) + int_theta * state.A[i]);
      }
    }
    fourier.inverse(vf, buf);
    out.v_low = real_parts(buf);
    out.p_low = p_phys;
  }

  // Upper deck: decaying extension of (-P, -dxA, P); the pair (u2, v2) is
  // conjugate-harmonic mode by mode.
  const std::size_t n_yt = options.n_ytilde;
  out.u2.resize(n_x * n_yt);
  out.v2.resize(n_x * n_yt);
  out.p2.resize(n_x * n_yt);
  double cr = 0.0;
  {
    SurfaceSpectrum u2s(grid), v2s(grid), p2s(grid);
    std::vector<complex> bu, bv, bp;
    for (std::size_t jt = 0; jt < n_yt; ++jt) {
      for (std::size_t i = 0; i < n_x; ++i) {
        const double xi = grid.xi(i);
        const double decay = std::exp(-std::abs(xi) * out.ytilde[jt]);
        p2s[i] = pressure[i] * decay;
        u2s[i] = -p2s[i];
        v2s[i] = -dxa[i] * decay;
        const complex div =
            complex(0.0, xi) * u2s[i] - std::abs(xi) * v2s[i];
        const complex curl =
            complex(0.0, xi) * v2s[i] + std::abs(xi) * u2s[i];
        cr = std::max(cr, std::abs(div) + std::abs(curl));
      }
      fourier.inverse(u2s, bu);
      fourier.inverse(v2s, bv);
      fourier.inverse(p2s, bp);
      for (std::size_t i = 0; i < n_x; ++i) {
        out.u2[i * n_yt + jt] = bu[i].real();
        out.v2[i * n_yt + jt] = bv[i].real();
        out.p2[i * n_yt + jt] = bp[i].real();
      }
    }
  }
  out.cr_residual = cr;
  return out;
}

double matching_mismatch(const Fourier& fourier, const DeckState& state,
                         const BlasiusProfile& blasius, double nu,
                         double ybar) {
  if (!(nu > 0.0 && nu < 1.0))
    throw std::invalid_argument("matching_mismatch: nu must lie in (0,1)");
  const Grid& grid = fourier.grid();
  const double eighth = std::pow(nu, 1.0 / 8.0);
  const double y_lower = ybar / eighth;  // the same height in lower-deck units
  if (y_lower > grid.y_max())
    throw std::invalid_argument(
        "matching_mismatch: overlap height exceeds the lower-deck box");

  // Linear-in-y sample of wbar at the overlap height, mode by mode.
  const double pos = y_lower / grid.dy();
  const std::size_t j0 =
      std::min(static_cast<std::size_t>(pos), grid.n_y() - 2);
  const double frac = pos - static_cast<double>(j0);

  SurfaceSpectrum trace(grid);
  for (std::size_t i = 0; i < grid.n_modes(); ++i) {
    const complex w_at_y =
        (1.0 - frac) * state.wbar(i, j0) + frac * state.wbar(i, j0 + 1);
    trace[i] = w_at_y +
               theta(grid.xi(i), y_lower, state.t, state.eps) * state.A[i];
  }
  std::vector<complex> tr_buf, a_buf;
  fourier.inverse(trace, tr_buf);
  fourier.inverse(state.A, a_buf);

  const double ub = blasius.u_b(ybar);
  const double ubp = blasius.u_b_prime(ybar);
  double worst = 0.0;
  for (std::size_t i = 0; i < grid.n_modes(); ++i) {
    const double u_main = ub + eighth * a_buf[i].real() * ubp;
    const double u_low = eighth * (y_lower + tr_buf[i].real());
    worst = std::max(worst, std::abs(u_main - u_low));
  }
  return worst;
}

}  // namespace tdk
