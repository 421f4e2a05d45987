#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "tdk/audit.h"
#include "tdk/deck_terms.h"
#include "tdk/field.h"
#include "tdk/fourier.h"
#include "tdk/ledger.h"
#include "tdk/norms.h"

namespace tdk {

/// Control block of a time integration.  Sources, when set, are sampled at
/// the step instants; a shear source must keep its wall rows zero.
struct StepperConfig {
  double dt = 2e-4;
  double t_end = 0.1;

  std::size_t ledger_cadence = 1;      // rows every k-th step; 0 disables
  std::size_t checkpoint_cadence = 0;  // hook every k-th step; 0 disables
  std::size_t lemma_cadence = 50;      // monitor snapshots; 0 disables

  bool evolve_wbar = true;     // false: displacement-only integration
  bool nonlinear_terms = true; // false: drop N, L, M, B (linear column runs)
  bool forced_bo = true;       // false: unforced classical displacement flow

  int n_threads = 1;

  NormParams norms;  // tau is the initial radius; eps must match the state
  double c1 = 1.0;
  double c2 = 1.0;

  std::function<SpectralField(double)> source_w;
  std::function<SurfaceSpectrum(double)> source_A;

  /// Called after each committed checkpoint-cadence step with the new state,
  /// the new radius and the one-based step index.
  std::function<void(const DeckState&, double, std::size_t)> on_checkpoint;
};

enum class StopReason {
  completed,
  blow_up,           // non-finite field values; last good state returned
  radius_exhausted,  // the radius update crossed zero before t_end
};

struct LemmaSnapshot {
  double t = 0.0;
  std::vector<LemmaRatio> ratios;
};

struct RunResult {
  DeckState state;  // final state, or the last finite one on blow-up
  double tau = 0.0;
  std::size_t steps_taken = 0;
  StopReason reason = StopReason::completed;
  EnergyLedger ledger;               // residual columns finalized
  std::vector<AuditSample> samples;  // aligned with ledger rows
  std::vector<LemmaSnapshot> lemmas;
};

/// One fully-populated ledger row for a single instant (residual columns
/// NaN, E over the one-row window); the degenerate t_end = start run.
LedgerRow snapshot_row(const Fourier& fourier, const DeckState& state,
                       double tau, const StepperConfig& config,
                       AuditSample* sample_out = nullptr);

/// Second-order integrator of the coupled shear/displacement pair.
///
/// Shear: Strang split per step.  The transport phase e^{-i xi y dt/2} is
/// applied exactly before and after a Crank-Nicolson stage of the compact
/// (Numerov) diffusion operator; the remaining terms enter the stage as a
/// midpoint forcing extrapolated from the two previous evaluations.  The
/// stage matrix is mode-independent, so one real tridiagonal factorization
/// serves every mode.
///
/// Displacement: integrating-factor two-step scheme.  The dispersion phase
/// e^{-i xi |xi| dt} is exact; the transported remainder is advanced by the
/// two-step formula in the dispersion frame.
///
/// The first step runs a predictor/corrector bootstrap of the same order.
/// The analyticity radius is advanced every step by the explicit rule
/// tau' = tau - dt (Gamma1 + 1) with Gamma1 evaluated at the step start.
class Stepper {
 public:
  Stepper(const Fourier& fourier, StepperConfig config);

  /// Integrates from the initial state's time to t_end.  tau0 is the radius
  /// at the initial instant.  Times are start + k dt exactly.
  RunResult run(const DeckState& initial, double tau0);

 private:
  struct TermsBundle {
    ThetaBank bank;
    SpectralField n, l, m, b;
    bool have_terms = false;
  };

  TermsBundle eval_terms(const DeckState& s, bool need_bank) const;
  SpectralField assemble_forcing(const TermsBundle& tb, double t) const;
  SurfaceSpectrum eval_transport(const DeckState& s) const;

  void apply_half_phase(SpectralField& w) const;
  void apply_dispersion(SurfaceSpectrum& a) const;
  /// One CN stage on the already half-phased field, in place.
  void cn_stage(SpectralField& w, const SpectralField& f_mid) const;
  SpectralField strang_step(const SpectralField& w,
                            const SpectralField& f_mid) const;

  void push_row(const DeckState& s, double tau, const TermsBundle& tb,
                const CompositeNorms& cn, const GammaPair& g, RunResult& res,
                double t_row) const;

  const Fourier& fourier_;
  StepperConfig config_;

  // Precomputed per-step multipliers and the shared stage factorization.
  std::vector<complex> phase_half_;  // n_modes x n_y
  std::vector<complex> disp_;        // n_modes
  std::vector<double> thomas_upper_;
  std::vector<double> thomas_inv_diag_;
  double lhs_off_ = 0.0;
  double rhs_diag_ = 0.0;
  double rhs_off_ = 0.0;
};

}  // namespace tdk
