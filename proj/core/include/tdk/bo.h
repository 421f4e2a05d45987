#pragma once

#include "tdk/field.h"
#include "tdk/fourier.h"
#include "tdk/grid.h"

namespace tdk {

/// Quadratic transport term of the displacement equation,
/// -i int A_eta (xi-eta) A_{xi-eta} d eta, dealiased, with the mean mode
/// zeroed (its analytic value is an odd-integrand integral).
SurfaceSpectrum bo_quadratic(const Fourier& fourier, const SurfaceSpectrum& A);

/// Full forced displacement tendency
///   dA/dt = -i xi c_theta A + i xi I_ymax[wbar] - i xi |xi| A + quadratic,
/// with the column constant taken as the trapezoid c_theta_discrete of the
/// shared grid.  Output is Hermitian whenever the inputs are.
SurfaceSpectrum bo_rhs(const Fourier& fourier, const SurfaceSpectrum& A,
                       const SpectralField& wbar, double t, double eps);

/// Forced tendency without the dispersion term -i xi |xi| A; this is the
/// part an integrating-factor stepper advances explicitly.
SurfaceSpectrum bo_rhs_no_dispersion(const Fourier& fourier,
                                     const SurfaceSpectrum& A,
                                     const SpectralField& wbar, double t,
                                     double eps);

/// Unforced classical tendency -A A_x - dx|dx| A.
SurfaceSpectrum bo_rhs_classical(const Fourier& fourier,
                                 const SurfaceSpectrum& A);

struct BOInvariants {
  double mean = 0.0;
  double l2_mass = 0.0;
};
/// mean: the zeroth Fourier coefficient; l2_mass: the Plancherel sum
/// (dxi / 2 pi) sum |A_k|^2.
BOInvariants bo_invariants(const Grid& grid, const SurfaceSpectrum& A);

struct SolitonInfo {
  double amplitude = 0.0;     // profile peak value a (signed)
  double width = 0.0;         // b in a / (1 + b (x-x0)^2)
  double speed = 0.0;         // least-squares traveling speed on this grid
  double residual_l2 = 0.0;   // L2 residual of the selected ansatz
  int branch = 0;             // +1 or -1, the selected sign candidate
};

/// Solitary-wave initial data for the unforced classical equation.  The
/// algebraic profile a/(1+b(x-x0)^2) with b = c^2 is periodized onto the
/// torus in closed form, which makes its coefficients an exact geometric
/// sequence; the sign of a (and the matching speed) is picked by minimizing
/// the discrete traveling-wave residual over the two candidates +-4c.
/// The returned spectrum is dealiased and Nyquist-free.
///
/// tail_tol bounds the boundary value of the unperiodized profile relative
/// to the peak; a torus too short for that bound is a configuration error.
SurfaceSpectrum bo_soliton(const Fourier& fourier, double c, double x0,
                           double tail_tol = 1e-6,
                           SolitonInfo* info = nullptr);

}  // namespace tdk
