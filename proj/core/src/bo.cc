#include "tdk/bo.h"

#include <cmath>
#include <stdexcept>

#include "tdk/weights.h"
#include "tdk/ydiff.h"

namespace tdk {

SurfaceSpectrum bo_quadratic(const Fourier& fourier, const SurfaceSpectrum& A) {
  const Grid& grid = fourier.grid();
  SurfaceSpectrum dA(grid);
  ddx(grid, A, dA);
  SurfaceSpectrum out(grid);
  fourier.convolve(A, dA, out);
  for (std::size_t i = 0; i < grid.n_modes(); ++i) out[i] = -out[i];
  out[0] = 0.0;
  return out;
}

SurfaceSpectrum bo_rhs_no_dispersion(const Fourier& fourier,
                                     const SurfaceSpectrum& A,
                                     const SpectralField& wbar, double t,
                                     double eps) {
  const Grid& grid = fourier.grid();
  if (A.n_modes() != grid.n_modes() || wbar.n_modes() != grid.n_modes() ||
      wbar.n_y() != grid.n_y())
    throw std::invalid_argument("bo_rhs: input shapes do not match grid");

  SurfaceSpectrum out = bo_quadratic(fourier, A);
  SurfaceSpectrum column(grid);
  integrate_y_full(grid, wbar, column);
  for (std::size_t i = 0; i < grid.n_modes(); ++i) {
    const double xi = grid.xi(i);
    const double c_disc = c_theta_discrete(grid, xi, t, eps);
    out[i] += complex(0.0, xi) * (column[i] - c_disc * A[i]);
  }
  return out;
}

SurfaceSpectrum bo_rhs(const Fourier& fourier, const SurfaceSpectrum& A,
                       const SpectralField& wbar, double t, double eps) {
  const Grid& grid = fourier.grid();
  SurfaceSpectrum out = bo_rhs_no_dispersion(fourier, A, wbar, t, eps);
  for (std::size_t i = 0; i < grid.n_modes(); ++i) {
    const double xi = grid.xi(i);
    out[i] -= complex(0.0, xi * std::abs(xi)) * A[i];
  }
  return out;
}

SurfaceSpectrum bo_rhs_classical(const Fourier& fourier,
                                 const SurfaceSpectrum& A) {
  const Grid& grid = fourier.grid();
  SurfaceSpectrum out = bo_quadratic(fourier, A);
  for (std::size_t i = 0; i < grid.n_modes(); ++i) {
    const double xi = grid.xi(i);
    out[i] -= complex(0.0, xi * std::abs(xi)) * A[i];
  }
  return out;
}

BOInvariants bo_invariants(const Grid& grid, const SurfaceSpectrum& A) {
  BOInvariants inv;
  inv.mean = A[0].real();
  double sum = 0.0;
  for (std::size_t i = 0; i < grid.n_modes(); ++i) sum += std::norm(A[i]);
  inv.l2_mass = sum * grid.dxi() / (2.0 * M_PI);
  return inv;
}

namespace {

// Coefficients of the periodized algebraic profile a/(1+c^2 (x-x0)^2):
// an exact geometric sequence (a pi / c) q^{|k|} e^{-i xi_k x0} with
// q = exp(-1 / (c L_x)).
SurfaceSpectrum geometric_spectrum(const Grid& grid, double a, double c,
                                   double x0) {
  SurfaceSpectrum A(grid);
  const double q = std::exp(-1.0 / (c * grid.half_length()));
  const double scale = a * M_PI / c;
  const long limit = grid.dealias_limit();
  for (std::size_t i = 0; i < grid.n_modes(); ++i) {
    const long k = grid.wavenumber(i);
    if (k < -limit || k > limit) {
      A[i] = 0.0;
      continue;
    }
    const double xi = grid.xi(i);
    const double mag = scale * std::pow(q, static_cast<double>(std::abs(k)));
    A[i] = mag * std::exp(complex(0.0, -xi * x0));
  }
  return A;
}

struct TravelingFit {
  double speed = 0.0;
  double residual_l2 = 0.0;
};

TravelingFit fit_traveling_speed(const Fourier& fourier,
                                 const SurfaceSpectrum& A) {
  const Grid& grid = fourier.grid();
  SurfaceSpectrum tendency = bo_rhs_classical(fourier, A);
  SurfaceSpectrum dA(grid);
  ddx(grid, A, dA);

  // dA/dt = -v dA/dx for a traveling wave; least-squares v over all modes.
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < grid.n_modes(); ++i) {
    num += (std::conj(dA[i]) * tendency[i]).real();
    den += std::norm(dA[i]);
  }
  TravelingFit fit;
  fit.speed = den > 0.0 ? -num / den : 0.0;

  double res = 0.0;
  for (std::size_t i = 0; i < grid.n_modes(); ++i)
    res += std::norm(tendency[i] + fit.speed * dA[i]);
  fit.residual_l2 = std::sqrt(res * grid.dxi() / (2.0 * M_PI));
  return fit;
}

}  // namespace

SurfaceSpectrum bo_soliton(const Fourier& fourier, double c, double x0,
                           double tail_tol, SolitonInfo* info) {
  const Grid& grid = fourier.grid();
  if (!(c > 0.0)) throw std::invalid_argument("bo_soliton: speed must be positive");

  const double edge = M_PI * grid.half_length();
  const double d = edge - std::abs(x0);
  if (!(d > 0.0))
    throw std::invalid_argument("bo_soliton: center outside the torus");
  // Coefficients decay geometrically with ratio q = e^{-1/(c L_x)}; the
  // retained band must reach down to tail_tol of the peak coefficient or
  // the dealias truncation dominates the traveling residual.
  const double rel_tail =
      std::exp(-static_cast<double>(grid.dealias_limit()) /
               (c * grid.half_length()));
  if (rel_tail > tail_tol)
    throw std::invalid_argument(
        "bo_soliton: retained mode band too narrow for the requested tail "
        "tolerance");

  SolitonInfo best;
  SurfaceSpectrum best_A;
  for (int branch : {-1, +1}) {
    const double a = 4.0 * c * static_cast<double>(branch);
    SurfaceSpectrum A = geometric_spectrum(grid, a, c, x0);
    TravelingFit fit = fit_traveling_speed(fourier, A);
    if (best.branch == 0 || fit.residual_l2 < best.residual_l2) {
      best.amplitude = a;
      best.width = c * c;
      best.speed = fit.speed;
      best.residual_l2 = fit.residual_l2;
      best.branch = branch;
      best_A = A;
    }
  }
  if (info != nullptr) *info = best;
  return best_A;
}

}  // namespace tdk
