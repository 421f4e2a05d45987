#pragma once

#include <string>
#include <vector>

#include "tdk/deck_terms.h"
#include "tdk/field.h"
#include "tdk/grid.h"
#include "tdk/ledger.h"
#include "tdk/norms.h"

namespace tdk {

/// Weighted real inner product of two fields:
///   sum_k dxi e^{2 tau |xi_k|} <xi_k>^{2r} int y_weight_sq Re(conj(v) u) dy
/// (trapezoid in y).  y_weight_sq carries rho^2 and any cutoff squared.
double weighted_inner(const Grid& grid, const SpectralField& u,
                      const SpectralField& v, double tau, double r,
                      const std::vector<double>& y_weight_sq);

/// Surface version (no y integral or weight).
double weighted_inner(const Grid& grid, const SurfaceSpectrum& u,
                      const SurfaceSpectrum& v, double tau, double r);

/// Skew-symmetry check scalars: plain signed sums whose analytic value is
/// zero by oddness in xi; reported relative to the matching even sum.
double oddness_scalar_shear(const Grid& grid, const SpectralField& wbar,
                            double tau, double r, double t, double eps);
double oddness_scalar_vorticity(const Grid& grid, const SpectralField& dy_wbar,
                                double tau, double r, double t, double eps);

/// Per-sample scalars needed to finalize the three balance residuals.
/// half_* are (1/2)||.||^2 values, diss_* the |dx|^{1/2} squares, damp_* the
/// weight-damping squares already scaled by 1/(8 eps s^2), rhs_* the weighted
/// inner product of the assembled discrete tendency with the state.
struct AuditSample {
  double half_A_sq = 0.0;
  double diss_A_sq = 0.0;
  double rhs_A = 0.0;
  double half_w_sq = 0.0;
  double diss_w_sq = 0.0;
  double damp_w = 0.0;
  double rhs_w = 0.0;
  double half_vort_sq = 0.0;
  double diss_vort_sq = 0.0;
  double damp_vort = 0.0;
  double rhs_vort = 0.0;
  double odd_shear = 0.0;
  double odd_vort = 0.0;
};

/// Computes the T_* ledger columns and the balance sample for one state.
/// The four term fields must be the ones entering the step at this instant;
/// source fields may be null when the run is unforced.
AuditSample compute_audit_sample(
    const Fourier& fourier, const DeckState& state, const ThetaBank& bank,
    double tau, double r, const SpectralField& n_term,
    const SpectralField& l_term, const SpectralField& m_term,
    const SpectralField& b_term, const SpectralField* source_w,
    const SurfaceSpectrum* source_A, int n_threads, LedgerRow& row);

/// Fills the residual columns of interior ledger rows by centered
/// differences of the sampled scalars; first and last rows get NaN.  The
/// radius slope is taken from the ledger's own tau column, which cancels the
/// first-order quadrature bias of the explicit radius update.
void finalize_residuals(EnergyLedger& ledger,
                        const std::vector<AuditSample>& samples);

/// One estimate monitor: |T| against the product-of-norms majorant.
struct LemmaRatio {
  std::string label;
  double t_value = 0.0;
  double bound = 0.0;
  double ratio = 0.0;
  bool active = false;
};

/// Evaluates the ten nonlinear-term majorants as implied-constant ratios.
/// Zero states report every monitor inactive; audits assert stability of
/// these ratios under refinement, never their magnitude.
std::vector<LemmaRatio> audit_lemma_bounds(const Fourier& fourier,
                                           const DeckState& state,
                                           const NormParams& params,
                                           int n_threads = 1);

}  // namespace tdk
