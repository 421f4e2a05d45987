#pragma once

#include <vector>

#include "tdk/deck_terms.h"
#include "tdk/field.h"
#include "tdk/grid.h"
#include "tdk/ledger.h"

namespace tdk {

/// Parameters of the analytic norm family.
struct NormParams {
  double tau = 0.1;     // analyticity radius, >= 0
  double r = 2.5;       // Sobolev exponent, > 2
  double delta = 1.0;   // balance weight of the lagging vorticity norms, > 1
  double eps = 1.0 / 64.0;
};

/// Weighted analytic norm of a profile field:
///   ( sum_k dxi e^{2 tau |xi_k|} <xi_k>^{2r} int rho^2 |f_k|^2 dy )^{1/2}
/// with trapezoid y-quadrature.  Evaluated mode-wise in the log domain so
/// large tau |xi| cannot overflow.  If the top third of the mode range
/// carries more than 1% of the square, *under_resolved is set (the radius
/// weight is not resolved by this grid).
double norm_tau_r(const Grid& grid, const SpectralField& f, double tau,
                  double r, double t, double eps,
                  bool* under_resolved = nullptr);

/// Same norm without the y-integral and weight, for surface spectra.
double norm_tilde(const Grid& grid, const SurfaceSpectrum& g, double tau,
                  double r, bool* under_resolved = nullptr);

/// Multiplies each y-profile pointwise by a real profile (cutoffs, y-powers).
void scale_by_y_profile(const Grid& grid, const std::vector<double>& profile,
                        SpectralField& f);

/// |dx|^{1/2}: the multiplier |xi|^{1/2}.
void apply_half_x_derivative(const Grid& grid, SpectralField& f);
void apply_half_x_derivative(const Grid& grid, SurfaceSpectrum& f);

/// <dx>^{1/2}: the multiplier (1+xi^2)^{1/4}.
void apply_half_x_bracket(const Grid& grid, SpectralField& f);
void apply_half_x_bracket(const Grid& grid, SurfaceSpectrum& f);

struct CompositeNorms {
  double X = 0.0;
  double Y = 0.0;
  double Z = 0.0;
  double H = 0.0;
  bool under_resolved = false;
};

/// The four composite norms of the shear/displacement pair:
///   X = ||wbar||_{tau,r} + (1/delta)||chi dy wbar||_{tau,r-1/2} + ||A||~
///   Y = X's pattern with |dx|^{1/2} inserted in every slot
///   Z = ||dy wbar||_{tau,r} + (1/delta)||chi dyy wbar||_{tau,r-1/2}
///   H = ||y wbar||_{tau,r} + (1/delta)||y chi dy wbar||_{tau,r-1/2}
CompositeNorms composite_norms(const Grid& grid, const DeckState& state,
                               const NormParams& params);

/// Total analytic energy over the first `count` ledger rows:
///   sup X^2 + int Y^2 + (1/16) int Z^2 + (1/(64 eps)) int H^2,
/// time integrals by trapezoid over the sampled instants.
double total_energy(const EnergyLedger& ledger, double eps, std::size_t count);

struct GammaPair {
  double gamma1 = 0.0;
  double gamma2 = 0.0;
};

/// Radius-decay rates:
///   Gamma1 = C1 (H^2 + (1/eps + Z/4 + X + delta H))
///   Gamma2 = C2 (1/eps + Z/4 + X + delta H)
GammaPair gammas(const CompositeNorms& norms, double eps, double delta,
                 double c1, double c2);

/// One explicit Euler step of the radius ODE, tau' = tau - dt (Gamma1 + 1);
/// matches the ledger quadrature so tau(t) + t + sum Gamma1 dt = tau0 holds
/// to round-off.  A result <= 0 means the analyticity radius is exhausted.
double advance_tau(double tau, double gamma1, double dt);

/// Universal constants of the a-priori estimates; unquantified in the
/// analysis, so they are configuration values defaulting to 1.
struct EstimateConstants {
  double c0_tilde = 1.0;
  double c1 = 1.0;
  double c2 = 1.0;
};

struct SelectedParams {
  double delta = 0.0;
  double eps = 0.0;
  double t_star = 0.0;
  bool feasible = false;
};

/// The delta part of the smallness selection alone; it depends only on the
/// universal constants, never on the data.
double select_delta(const EstimateConstants& constants);

/// Smallness selection for a certified run: first delta from
/// 1/100 + C0~/delta^2 <= 1/16, then eps = min(1/64, tau0/(12 C1 E0)), then
/// the largest T* <= eps (dyadic bisection) satisfying the four remaining
/// closed-form inequalities, each monotone in T:
///   (b) T^{1/4} C2 (1+delta) (T^{1/2}/eps + 1) <= 1
///   (c) T^{1/2} C1 (1+delta) (T^{1/2}+1) ((3/2) E0)^{1/2} <= tau0/8
///   (d) T <= tau0/4
///   (e) T^{1/4} (1 + E0^{1/4}) <= 1/16
/// feasible=false when no T* above 1e-12 exists (data too large for a
/// certified run).
SelectedParams select_parameters(double e0, double tau0,
                                 const EstimateConstants& constants);

}  // namespace tdk
