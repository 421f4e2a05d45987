#pragma once

#include <cstddef>
#include <vector>

#include "tdk/blasius.h"
#include "tdk/deck_terms.h"
#include "tdk/field.h"
#include "tdk/fourier.h"

namespace tdk {

/// Coordinate maps and amplitude factors tying deck variables to the
/// physical plane at viscosity nu:
///   x = 1 + nu^{3/8} X,   y = nu^{1/2} Ybar = nu^{5/8} Y = nu^{3/8} Ytilde,
///   t = nu^{1/4} T,
/// with deck amplitudes (nu^{1/8} U, nu^{3/8} V, nu^{1/4} P) below,
/// (U_B + nu^{1/8} u1, nu^{1/4} v1, nu^{1/4} p1) in the middle and
/// (1 + nu^{1/4} u2, nu^{1/4} v2, nu^{1/4} p2) on top.
struct DeckScalings {
  double nu = 0.0;
  double x_scale = 0.0;       // nu^{3/8}
  double ybar_scale = 0.0;    // nu^{1/2}
  double y_scale = 0.0;       // nu^{5/8}
  double ytilde_scale = 0.0;  // nu^{3/8}
  double t_scale = 0.0;       // nu^{1/4}
  double u_main_pert = 0.0;   // nu^{1/8}
  double uvp_quarter = 0.0;   // nu^{1/4}; v1, p1, u2, v2, p2
  double u_lower = 0.0;       // nu^{1/8}
  double v_lower = 0.0;       // nu^{3/8}
};

struct ReconstructOptions {
  std::size_t n_ybar = 129;
  double ybar_max = 6.0;
  std::size_t n_ytilde = 65;
  double ytilde_max = 4.0;
};

/// Leading-order three-deck fields in deck units (compose with the recorded
/// scalings for physical values).  All 2-d arrays are x-major.
struct DeckComposite {
  DeckScalings scalings;
  std::vector<double> x;        // tangential collocation points (X variable)
  std::vector<double> y_lower;  // the grid's y nodes (Y variable)
  std::vector<double> ybar;
  std::vector<double> ytilde;

  std::vector<double> u1, v1, p1;    // main deck, n_x * n_ybar
  std::vector<double> u_low, v_low;  // lower deck, n_x * n_y
  std::vector<double> p_low;         // lower deck, n_x (Y-independent)
  std::vector<double> u2, v2, p2;    // upper deck, n_x * n_ytilde

  // Largest spectral Cauchy-Riemann defect of the upper-deck pair, with the
  // analytic Ytilde derivative; nonzero only through round-off.
  double cr_residual = 0.0;
};

/// P_xi = |xi| A_xi, the spectral form of the principal-value coupling.
SurfaceSpectrum pressure_from_displacement(const Grid& grid,
                                           const SurfaceSpectrum& A);

/// Assembles the three decks from a lower-deck state:
///   main:  u1 = A U_B', v1 = -dxA U_B, p1 = P;
///   lower: U = Y + wbar + theta A, V from continuity, P from A;
///   upper: (u2, v2, p2) = (-P, -dxA, P) extended by e^{-|xi| Ytilde}.
/// Wall conditions U(X,0) = V(X,0) = 0 hold exactly by construction.
DeckComposite reconstruct(const Fourier& fourier, const DeckState& state,
                          const BlasiusProfile& blasius, double nu,
                          const ReconstructOptions& options = {});

/// Max-over-x mismatch between the physical main-deck speed and the physical
/// lower-deck speed at the same height y = nu^{1/2} ybar:
///   | U_B(ybar) + nu^{1/8} A u_b' (ybar)
///     - nu^{1/8} (Y + wbar(Y) + theta(Y) A) |,   Y = ybar nu^{-1/8};
/// decays like the quartic flatness of U_B at the wall when ybar -> 0.
double matching_mismatch(const Fourier& fourier, const DeckState& state,
                         const BlasiusProfile& blasius, double nu,
                         double ybar);

}  // namespace tdk
