#include "tdk/deck_terms.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <thread>
#include <vector>

#include "tdk/bo.h"
#include "tdk/ydiff.h"

namespace tdk {

namespace {

std::size_t storage_index(const Grid& grid, long k) {
  return k >= 0 ? static_cast<std::size_t>(k)
                : static_cast<std::size_t>(k + static_cast<long>(grid.n_modes()));
}

void zero_wall_rows(const Grid& grid, SpectralField& f) {
  for (std::size_t i = 0; i < grid.n_modes(); ++i) {
    f(i, 0) = 0.0;
    f(i, grid.n_y() - 1) = 0.0;
  }
}

/// Runs fn(k) for every output wavenumber k in the dealiased band, statically
/// partitioned; results are written to disjoint rows so the outcome does not
/// depend on the thread count.
void for_each_band_mode(const Grid& grid, int n_threads,
                        const std::function<void(long)>& fn) {
  const long limit = grid.dealias_limit();
  std::vector<long> modes;
  modes.reserve(2 * limit + 1);
  for (long k = -limit; k <= limit; ++k) modes.push_back(k);

  if (n_threads <= 1) {
    for (long k : modes) fn(k);
    return;
  }
  const std::size_t per =
      (modes.size() + static_cast<std::size_t>(n_threads) - 1) /
      static_cast<std::size_t>(n_threads);
  std::vector<std::thread> workers;
  for (int tix = 0; tix < n_threads; ++tix) {
    const std::size_t begin = static_cast<std::size_t>(tix) * per;
    if (begin >= modes.size()) break;
    const std::size_t end = std::min(modes.size(), begin + per);
    workers.emplace_back([&modes, &fn, begin, end] {
      for (std::size_t i = begin; i < end; ++i) fn(modes[i]);
    });
  }
  for (auto& w : workers) w.join();
}

void check_state_shapes(const Grid& grid, const SpectralField& wbar,
                        const SurfaceSpectrum& A) {
  if (wbar.n_modes() != grid.n_modes() || wbar.n_y() != grid.n_y() ||
      A.n_modes() != grid.n_modes())
    throw std::invalid_argument("deck terms: input shapes do not match grid");
}

}  // namespace

SpectralField vbar(const Grid& grid, const SpectralField& wbar) {
  SpectralField column(grid);
  integrate_y(grid, wbar, column);
  for (std::size_t i = 0; i < grid.n_modes(); ++i) {
    const complex factor(0.0, -grid.xi(i));
    complex* profile = column.profile(i);
    for (std::size_t j = 0; j < grid.n_y(); ++j) profile[j] *= factor;
  }
  return column;
}

SpectralField term_N(const Fourier& fourier, const SpectralField& wbar) {
  const Grid& grid = fourier.grid();
  SpectralField dx_w(grid), dy_w(grid), transport(grid), lift(grid);
  ddx(grid, wbar, dx_w);
  ddy(grid, wbar, dy_w);
  fourier.convolve(wbar, dx_w, transport);
  SpectralField v = vbar(grid, wbar);
  fourier.convolve(v, dy_w, lift);
  transport += lift;
  zero_wall_rows(grid, transport);
  return transport;
}

SpectralField term_L(const Grid& grid, const SpectralField& wbar,
                     const SurfaceSpectrum& A, const ThetaBank& bank,
                     int n_threads) {
  check_state_shapes(grid, wbar, A);
  SpectralField int_w(grid);
  integrate_y(grid, wbar, int_w);

  SpectralField out(grid);
  const std::size_t ny = grid.n_y();
  const long limit = grid.dealias_limit();
  const complex prefactor(0.0, 1.0 / (2.0 * M_PI * grid.half_length()));

  for_each_band_mode(grid, n_threads, [&](long k) {
    const std::size_t row = storage_index(grid, k);
    complex* acc = out.profile(row);
    for (long m = std::max(-limit, k - limit); m <= std::min(limit, k + limit);
         ++m) {
      const long p = k - m;
      const std::size_t im = storage_index(grid, m);
      const std::size_t ip = storage_index(grid, p);
      const double xi_m = grid.xi(im);
      const double xi_p = grid.xi(ip);
      const complex* w_m = wbar.profile(im);
      const complex* w_p = wbar.profile(ip);
      const complex* iw_m = int_w.profile(im);
      const complex a_p_xi = A[ip] * xi_p;
      const complex a_p = A[ip];
      const complex a_m_xi_p = A[im] * xi_p;
      const double* th_m = bank.theta.data() + im * ny;
      const double* th_p = bank.theta.data() + ip * ny;
      const double* dth_p = bank.dtheta_dy.data() + ip * ny;
      for (std::size_t j = 0; j < ny; ++j) {
        acc[j] += w_m[j] * a_p_xi * th_p[j] + a_m_xi_p * th_m[j] * w_p[j] -
                  xi_m * iw_m[j] * a_p * dth_p[j];
      }
    }
    for (std::size_t j = 0; j < ny; ++j) acc[j] *= prefactor;
  });
  zero_wall_rows(grid, out);
  return out;
}

SpectralField term_M(const Grid& grid, const SpectralField& wbar,
                     const SurfaceSpectrum& A, const ThetaBank& bank,
                     int n_threads) {
  check_state_shapes(grid, wbar, A);
  SpectralField dy_w(grid);
  ddy(grid, wbar, dy_w);

  SpectralField out(grid);
  const std::size_t ny = grid.n_y();
  const long limit = grid.dealias_limit();
  const complex prefactor(0.0, -1.0 / (2.0 * M_PI * grid.half_length()));

  for_each_band_mode(grid, n_threads, [&](long k) {
    const std::size_t row = storage_index(grid, k);
    complex* acc = out.profile(row);
    for (long m = std::max(-limit, k - limit); m <= std::min(limit, k + limit);
         ++m) {
      const std::size_t im = storage_index(grid, m);
      const std::size_t ip = storage_index(grid, k - m);
      const complex a_m_xi = A[im] * grid.xi(im);
      const complex* dw_p = dy_w.profile(ip);
      const double* ith_m = bank.int_theta.data() + im * ny;
      for (std::size_t j = 0; j < ny; ++j)
        acc[j] += a_m_xi * ith_m[j] * dw_p[j];
    }
    for (std::size_t j = 0; j < ny; ++j) acc[j] *= prefactor;
  });
  zero_wall_rows(grid, out);
  return out;
}

namespace {

/// Shared assembly of the two forcing forms.  rewritten=true builds the
/// decaying-summand version, false the original one; both substitute the
/// same displacement tendency.
SpectralField assemble_B(const Fourier& fourier, const SpectralField& wbar,
                         const SurfaceSpectrum& A, const ThetaBank& bank,
                         double t, double eps, bool rewritten, int n_threads) {
  const Grid& grid = fourier.grid();
  check_state_shapes(grid, wbar, A);
  const std::size_t ny = grid.n_y();

  SurfaceSpectrum dtA = bo_rhs(fourier, A, wbar, t, eps);
  SpectralField int_w(grid);
  integrate_y(grid, wbar, int_w);

  SpectralField out(grid);
  const long limit = grid.dealias_limit();
  const complex quad_prefactor(0.0, 1.0 / (2.0 * M_PI * grid.half_length()));

  for_each_band_mode(grid, n_threads, [&](long k) {
    const std::size_t row = storage_index(grid, k);
    const double xi = grid.xi(row);
    complex* acc = out.profile(row);
    const complex a_k = A[row];
    const complex dtA_k = dtA[row];
    const double* th = bank.theta.data() + row * ny;
    const double* dth_t = bank.dtheta_dt.data() + row * ny;
    const double* dth_yy = bank.d2theta_dy2.data() + row * ny;
    const double* ith = bank.int_theta.data() + row * ny;
    const complex* iw = int_w.profile(row);
    const complex iw_full = iw[ny - 1];
    const double c_disc = bank.c_disc[row];

    for (std::size_t j = 0; j < ny; ++j) {
      const double y = grid.y(j);
      acc[j] = a_k * (dth_t[j] - dth_yy[j]) + (th[j] - 1.0) * dtA_k;
      if (rewritten) {
        // I_y[1 - theta] = y - I_y[theta] holds exactly for the trapezoid.
        const double int_one_minus = y - ith[j];
        acc[j] += complex(0.0, xi) *
                  ((iw_full - iw[j]) +
                   a_k * (y * (th[j] - 1.0) - (c_disc - int_one_minus)));
      } else {
        acc[j] += dtA_k + complex(0.0, xi * std::abs(xi)) * a_k +
                  complex(0.0, xi) * (a_k * (y * th[j] - ith[j]) - iw[j]);
      }
    }

    for (long m = std::max(-limit, k - limit); m <= std::min(limit, k + limit);
         ++m) {
      const long p = k - m;
      const std::size_t im = storage_index(grid, m);
      const std::size_t ip = storage_index(grid, p);
      const complex pair = A[im] * A[ip];
      const complex pair_xi_p = pair * grid.xi(ip);
      const complex pair_xi_m = pair * grid.xi(im);
      const double* th_m = bank.theta.data() + im * ny;
      const double* th_p = bank.theta.data() + ip * ny;
      const double* ith_m = bank.int_theta.data() + im * ny;
      const double* dth_p = bank.dtheta_dy.data() + ip * ny;
      if (rewritten) {
        for (std::size_t j = 0; j < ny; ++j)
          acc[j] += quad_prefactor *
                    (pair_xi_p * (th_m[j] * th_p[j] - 1.0) -
                     pair_xi_m * ith_m[j] * dth_p[j]);
      } else {
        for (std::size_t j = 0; j < ny; ++j)
          acc[j] += quad_prefactor * (pair_xi_p * th_m[j] * th_p[j] -
                                      pair_xi_m * ith_m[j] * dth_p[j]);
      }
    }
  });
  zero_wall_rows(grid, out);
  return out;
}

}  // namespace

SpectralField term_B(const Fourier& fourier, const SpectralField& wbar,
                     const SurfaceSpectrum& A, const ThetaBank& bank, double t,
                     double eps, int n_threads) {
  return assemble_B(fourier, wbar, A, bank, t, eps, true, n_threads);
}

SpectralField term_B_unrewritten(const Fourier& fourier,
                                 const SpectralField& wbar,
                                 const SurfaceSpectrum& A,
                                 const ThetaBank& bank, double t, double eps,
                                 int n_threads) {
  return assemble_B(fourier, wbar, A, bank, t, eps, false, n_threads);
}

SpectralField prandtl_rhs(const Fourier& fourier, const DeckState& state,
                          int n_threads) {
  const Grid& grid = fourier.grid();
  ThetaBank bank = make_theta_bank(grid, state.t, state.eps);

  SpectralField rhs(grid);
  d2dy2(grid, state.wbar, rhs);
  for (std::size_t i = 0; i < grid.n_modes(); ++i) {
    const double xi = grid.xi(i);
    const complex* w = state.wbar.profile(i);
    complex* r = rhs.profile(i);
    for (std::size_t j = 0; j < grid.n_y(); ++j)
      r[j] -= complex(0.0, xi * grid.y(j)) * w[j];
  }
  rhs -= term_N(fourier, state.wbar);
  rhs -= term_L(grid, state.wbar, state.A, bank, n_threads);
  rhs -= term_M(grid, state.wbar, state.A, bank, n_threads);
  rhs -= term_B(fourier, state.wbar, state.A, bank, state.t, state.eps,
                n_threads);
  zero_wall_rows(grid, rhs);
  return rhs;
}

DyTerms dy_terms(const Fourier& fourier, const SpectralField& wbar,
                 const SurfaceSpectrum& A, const ThetaBank& bank, double t,
                 double eps, int n_threads) {
  const Grid& grid = fourier.grid();
  check_state_shapes(grid, wbar, A);
  const std::size_t ny = grid.n_y();
  const long limit = grid.dealias_limit();
  const complex quad_prefactor(0.0, 1.0 / (2.0 * M_PI * grid.half_length()));

  DyTerms out{SpectralField(grid), SpectralField(grid), SpectralField(grid),
              SpectralField(grid)};

  SpectralField dy_w(grid), dyy_w(grid), int_w(grid);
  ddy(grid, wbar, dy_w);
  d2dy2(grid, wbar, dyy_w);
  integrate_y(grid, wbar, int_w);

  // dy N(wbar, wbar) = N(wbar, dy wbar): same bilinear form, second slot
  // differentiated.
  {
    SpectralField dx_dy_w(grid), transport(grid), liftpart(grid);
    ddx(grid, dy_w, dx_dy_w);
    fourier.convolve(wbar, dx_dy_w, transport);
    SpectralField v = vbar(grid, wbar);
    fourier.convolve(v, dyy_w, liftpart);
    transport += liftpart;
    out.dyN = transport;
  }

  SurfaceSpectrum dtA = bo_rhs(fourier, A, wbar, t, eps);

  for_each_band_mode(grid, n_threads, [&](long k) {
    const std::size_t row = storage_index(grid, k);
    const double xi = grid.xi(row);
    complex* acc_l = out.dyL.profile(row);
    complex* acc_m = out.dyM.profile(row);
    complex* acc_b = out.dyB.profile(row);

    const complex a_k = A[row];
    const complex dtA_k = dtA[row];
    const double* dth = bank.dtheta_dy.data() + row * ny;
    const double* dth_yt = bank.d2theta_dydt.data() + row * ny;
    const double* dth_yyy = bank.d3theta_dy3.data() + row * ny;
    const complex* w_k = wbar.profile(row);
    for (std::size_t j = 0; j < ny; ++j) {
      const double y = grid.y(j);
      acc_b[j] = a_k * (dth_yt[j] - dth_yyy[j]) + dth[j] * dtA_k -
                 complex(0.0, xi) * w_k[j] +
                 complex(0.0, xi) * a_k * y * dth[j];
    }

    for (long m = std::max(-limit, k - limit); m <= std::min(limit, k + limit);
         ++m) {
      const long p = k - m;
      const std::size_t im = storage_index(grid, m);
      const std::size_t ip = storage_index(grid, p);
      const double xi_m = grid.xi(im);
      const double xi_p = grid.xi(ip);

      const complex* w_m = wbar.profile(im);
      const complex* w_p = wbar.profile(ip);
      const complex* dw_m = dy_w.profile(im);
      const complex* dw_p = dy_w.profile(ip);
      const complex* ddw_p = dyy_w.profile(ip);
      const complex* iw_m = int_w.profile(im);

      const complex a_m = A[im];
      const complex a_p = A[ip];
      const double* th_m = bank.theta.data() + im * ny;
      const double* th_p = bank.theta.data() + ip * ny;
      const double* ith_m = bank.int_theta.data() + im * ny;
      const double* dth_p = bank.dtheta_dy.data() + ip * ny;
      const double* dth_yy_p = bank.d2theta_dy2.data() + ip * ny;

      const complex a_p_xi = a_p * xi_p;
      const complex a_m_xi_p = a_m * xi_p;
      const complex a_m_xi_m = a_m * xi_m;
      const complex pair = a_m * a_p;
      const complex pair_xi_p = pair * xi_p;
      const complex pair_xi_m = pair * xi_m;

      for (std::size_t j = 0; j < ny; ++j) {
        acc_l[j] += dw_m[j] * a_p_xi * th_p[j] + w_m[j] * a_p_xi * dth_p[j] +
                    a_m_xi_p * th_m[j] * dw_p[j] -
                    xi_m * iw_m[j] * a_p * dth_yy_p[j];
        acc_m[j] += a_m_xi_m * (th_m[j] * dw_p[j] + ith_m[j] * ddw_p[j]);
        acc_b[j] += quad_prefactor * (pair_xi_p * th_m[j] * dth_p[j] -
                                      pair_xi_m * ith_m[j] * dth_yy_p[j]);
      }
    }
    for (std::size_t j = 0; j < ny; ++j) {
      acc_l[j] *= quad_prefactor;
      acc_m[j] *= -quad_prefactor;
    }
  });

  return out;
}

}  // namespace tdk
