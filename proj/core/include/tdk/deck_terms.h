#pragma once

#include "tdk/field.h"
#include "tdk/fourier.h"
#include "tdk/grid.h"
#include "tdk/weights.h"

namespace tdk {

/// Evolved pair: the homogenized shear profile wbar (Dirichlet at both
/// walls, Hermitian in xi) and the displacement spectrum A.
struct DeckState {
  SpectralField wbar;
  SurfaceSpectrum A;
  double t = 0.0;
  double eps = 1.0 / 64.0;

  DeckState() = default;
  explicit DeckState(const Grid& grid) : wbar(grid), A(grid) {}
};

/// v̄_xi = -i xi I_y[wbar_xi]; zero at the wall by construction.
SpectralField vbar(const Grid& grid, const SpectralField& wbar);

/// N_xi = i int ( wbar_eta (xi-eta) wbar_{xi-eta}
///                - eta I_y[wbar_eta] dy wbar_{xi-eta} ) d eta.
/// Computed by dealiased FFT products; wall rows zeroed.
SpectralField term_N(const Fourier& fourier, const SpectralField& wbar);

/// L_xi = i int ( wbar_eta (xi-eta) A_{xi-eta} theta_{xi-eta}
///                + A_eta theta_eta (xi-eta) wbar_{xi-eta}
///                - eta I_y[wbar_eta] A_{xi-eta} dy theta_{xi-eta} ) d eta.
/// The lift depends on the partner frequency, so this is a direct mode sum
/// over the dealiased band (O(N^2 n_y)); parallel over the output mode.
SpectralField term_L(const Grid& grid, const SpectralField& wbar,
                     const SurfaceSpectrum& A, const ThetaBank& bank,
                     int n_threads = 1);

/// M_xi = -i int eta A_eta I_y[theta_eta] dy wbar_{xi-eta} d eta;
/// same direct-sum contract as term_L.
SpectralField term_M(const Grid& grid, const SpectralField& wbar,
                     const SurfaceSpectrum& A, const ThetaBank& bank,
                     int n_threads = 1);

/// Remainder forcing in the rewritten form whose summands all decay in y:
///   A_xi (dt - dyy) theta_xi + (theta_xi - 1) dtA_xi
///   + i xi (I_{ymax}[wbar_xi] - I_y[wbar_xi])
///   + i xi A_xi ( y (theta_xi - 1) - (c_disc - I_y[1 - theta_xi]) )
///   + i int ( (xi-eta) A_eta A_{xi-eta} (theta_eta theta_{xi-eta} - 1)
///             - eta A_eta A_{xi-eta} I_y[theta_eta] dy theta_{xi-eta} ) d eta,
/// with dtA always the analytic substitution of the displacement tendency,
/// never a time difference.  Wall rows zeroed.
SpectralField term_B(const Fourier& fourier, const SpectralField& wbar,
                     const SurfaceSpectrum& A, const ThetaBank& bank, double t,
                     double eps, int n_threads = 1);

/// The same forcing before the rewrite (partial column integrals and the
/// explicit dispersion/displacement tendency kept separate).  Used only to
/// audit the algebraic equivalence of the two forms.
SpectralField term_B_unrewritten(const Fourier& fourier,
                                 const SpectralField& wbar,
                                 const SurfaceSpectrum& A,
                                 const ThetaBank& bank, double t, double eps,
                                 int n_threads = 1);

/// dt wbar_xi = dyy wbar_xi - i xi y wbar_xi - N - L - M - B, with wall rows
/// forced to zero.  Plain three-point dyy; the time stepper applies its own
/// compact diffusion operator and phase factor instead of this assembly.
SpectralField prandtl_rhs(const Fourier& fourier, const DeckState& state,
                          int n_threads = 1);

/// The y-differentiated term family of the vorticity layer, in the displayed
/// cancellation-friendly forms (closed-form lift derivatives, not finite
/// differences of the undifferentiated terms).
struct DyTerms {
  SpectralField dyN;
  SpectralField dyL;
  SpectralField dyM;
  SpectralField dyB;
};
DyTerms dy_terms(const Fourier& fourier, const SpectralField& wbar,
                 const SurfaceSpectrum& A, const ThetaBank& bank, double t,
                 double eps, int n_threads = 1);

}  // namespace tdk
