#include "tdk/stepper.h"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

#include "tdk/bo.h"
#include "tdk/norms.h"

namespace tdk {

Stepper::Stepper(const Fourier& fourier, StepperConfig config)
    : fourier_(fourier), config_(std::move(config)) {
  if (config_.dt <= 0.0)
    throw std::invalid_argument("stepper: dt must be positive");
  const Grid& grid = fourier_.grid();
  const double dt = config_.dt;

  phase_half_.resize(grid.n_modes() * grid.n_y());
  for (std::size_t i = 0; i < grid.n_modes(); ++i) {
    const double xi = grid.xi(i);
    for (std::size_t j = 0; j < grid.n_y(); ++j)
      phase_half_[i * grid.n_y() + j] =
          std::exp(complex(0.0, -0.5 * xi * grid.y(j) * dt));
  }
  disp_.resize(grid.n_modes());
  for (std::size_t i = 0; i < grid.n_modes(); ++i) {
    const double xi = grid.xi(i);
    disp_[i] = std::exp(complex(0.0, -xi * std::abs(xi) * dt));
  }

  // Stage matrices M -/+ (dt/2) D with M = tridiag(1,10,1)/12 and D the
  // three-point Laplacian; one real factorization serves every mode.
  const double lam = dt / (grid.dy() * grid.dy());
  const double lhs_diag = 10.0 / 12.0 + lam;
  lhs_off_ = 1.0 / 12.0 - 0.5 * lam;
  rhs_diag_ = 10.0 / 12.0 - lam;
  rhs_off_ = 1.0 / 12.0 + 0.5 * lam;

  const std::size_t n = grid.n_y() - 2;
  thomas_upper_.resize(n);
  thomas_inv_diag_.resize(n);
  double m = lhs_diag;
  thomas_inv_diag_[0] = 1.0 / m;
  thomas_upper_[0] = lhs_off_ / m;
  for (std::size_t k = 1; k < n; ++k) {
    m = lhs_diag - lhs_off_ * thomas_upper_[k - 1];
    thomas_inv_diag_[k] = 1.0 / m;
    thomas_upper_[k] = lhs_off_ / m;
  }
}

void Stepper::apply_half_phase(SpectralField& w) const {
  complex* d = w.data();
  const std::size_t nn = phase_half_.size();
  for (std::size_t q = 0; q < nn; ++q) d[q] *= phase_half_[q];
}

void Stepper::apply_dispersion(SurfaceSpectrum& a) const {
  for (std::size_t i = 0; i < disp_.size(); ++i) a[i] *= disp_[i];
}

void Stepper::cn_stage(SpectralField& w, const SpectralField& f_mid) const {
  const Grid& grid = fourier_.grid();
  const std::size_t ny = grid.n_y();
  const std::size_t n = ny - 2;
  const double dt = config_.dt;
  std::vector<complex> z(n);
  for (std::size_t i = 0; i < grid.n_modes(); ++i) {
    complex* wp = w.profile(i);
    const complex* fp = f_mid.profile(i);
    wp[0] = complex(0.0, 0.0);
    wp[ny - 1] = complex(0.0, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
      const std::size_t j = k + 1;
      complex r = rhs_diag_ * wp[j] + rhs_off_ * (wp[j - 1] + wp[j + 1]) +
                  dt * ((10.0 * fp[j] + fp[j - 1] + fp[j + 1]) / 12.0);
      if (k > 0) r -= lhs_off_ * z[k - 1];
      z[k] = r * thomas_inv_diag_[k];
    }
    for (std::size_t k = n - 1; k-- > 0;) z[k] -= thomas_upper_[k] * z[k + 1];
    for (std::size_t k = 0; k < n; ++k) wp[k + 1] = z[k];
  }
}

SpectralField Stepper::strang_step(const SpectralField& w,
                                   const SpectralField& f_mid) const {
  SpectralField out = w;
  apply_half_phase(out);
  cn_stage(out, f_mid);
  apply_half_phase(out);
  return out;
}

Stepper::TermsBundle Stepper::eval_terms(const DeckState& s,
                                         bool need_bank) const {
  const Grid& grid = fourier_.grid();
  TermsBundle tb;
  // The tabulated lifts are only consumed by the nonlinear terms and the
  // per-row audit; linear or frozen-shear steps skip the expensive fill.
  if (need_bank || (config_.evolve_wbar && config_.nonlinear_terms))
    tb.bank = make_theta_bank(grid, s.t, s.eps);
  tb.n = SpectralField(grid);
  tb.l = SpectralField(grid);
  tb.m = SpectralField(grid);
  tb.b = SpectralField(grid);
  if (config_.evolve_wbar && config_.nonlinear_terms) {
    tb.n = term_N(fourier_, s.wbar);
    tb.l = term_L(grid, s.wbar, s.A, tb.bank, config_.n_threads);
    tb.m = term_M(grid, s.wbar, s.A, tb.bank, config_.n_threads);
    tb.b = term_B(fourier_, s.wbar, s.A, tb.bank, s.t, s.eps,
                  config_.n_threads);
    tb.have_terms = true;
  }
  return tb;
}

SpectralField Stepper::assemble_forcing(const TermsBundle& tb,
                                        double t) const {
  SpectralField f(fourier_.grid());
  if (tb.have_terms) {
    f -= tb.n;
    f -= tb.l;
    f -= tb.m;
    f -= tb.b;
  }
  if (config_.source_w) f += config_.source_w(t);
  return f;
}

SurfaceSpectrum Stepper::eval_transport(const DeckState& s) const {
  SurfaceSpectrum g =
      config_.forced_bo
          ? bo_rhs_no_dispersion(fourier_, s.A, s.wbar, s.t, s.eps)
          : bo_quadratic(fourier_, s.A);
  if (config_.source_A) g += config_.source_A(s.t);
  return g;
}

void Stepper::push_row(const DeckState& s, double tau, const TermsBundle& tb,
                       const CompositeNorms& cn, const GammaPair& g,
                       RunResult& res, double t_row) const {
  LedgerRow row;
  row.t = t_row;
  row.tau = tau;
  row.X = cn.X;
  row.Y = cn.Y;
  row.Z = cn.Z;
  row.H = cn.H;
  row.Gamma1 = g.gamma1;
  row.Gamma2 = g.gamma2;

  SpectralField sw;
  const SpectralField* swp = nullptr;
  if (config_.source_w) {
    sw = config_.source_w(t_row);
    swp = &sw;
  }
  SurfaceSpectrum sa;
  const SurfaceSpectrum* sap = nullptr;
  if (config_.source_A) {
    sa = config_.source_A(t_row);
    sap = &sa;
  }

  AuditSample sample =
      compute_audit_sample(fourier_, s, tb.bank, tau, config_.norms.r, tb.n,
                           tb.l, tb.m, tb.b, swp, sap, config_.n_threads, row);
  res.ledger.append(row);
  res.samples.push_back(sample);
  res.ledger.rows.back().E =
      total_energy(res.ledger, s.eps, res.ledger.rows.size());
}

LedgerRow snapshot_row(const Fourier& fourier, const DeckState& state,
                       double tau, const StepperConfig& config,
                       AuditSample* sample_out) {
  const Grid& grid = fourier.grid();
  ThetaBank bank = make_theta_bank(grid, state.t, state.eps);
  SpectralField n(grid), l(grid), m(grid), b(grid);
  if (config.evolve_wbar && config.nonlinear_terms) {
    n = term_N(fourier, state.wbar);
    l = term_L(grid, state.wbar, state.A, bank, config.n_threads);
    m = term_M(grid, state.wbar, state.A, bank, config.n_threads);
    b = term_B(fourier, state.wbar, state.A, bank, state.t, state.eps,
               config.n_threads);
  }
  NormParams np = config.norms;
  np.tau = tau;
  np.eps = state.eps;
  const CompositeNorms cn = composite_norms(grid, state, np);
  const GammaPair g = gammas(cn, state.eps, np.delta, config.c1, config.c2);

  LedgerRow row;
  row.t = state.t;
  row.tau = tau;
  row.X = cn.X;
  row.Y = cn.Y;
  row.Z = cn.Z;
  row.H = cn.H;
  row.Gamma1 = g.gamma1;
  row.Gamma2 = g.gamma2;

  SpectralField sw;
  const SpectralField* swp = nullptr;
  if (config.source_w) {
    sw = config.source_w(state.t);
    swp = &sw;
  }
  SurfaceSpectrum sa;
  const SurfaceSpectrum* sap = nullptr;
  if (config.source_A) {
    sa = config.source_A(state.t);
    sap = &sa;
  }
  AuditSample sample =
      compute_audit_sample(fourier, state, bank, tau, config.norms.r, n, l, m,
                           b, swp, sap, config.n_threads, row);
  if (sample_out) *sample_out = sample;

  EnergyLedger one;
  one.append(row);
  row.E = total_energy(one, state.eps, 1);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  row.residual_A = nan;
  row.residual_w = nan;
  row.residual_vort = nan;
  return row;
}

RunResult Stepper::run(const DeckState& initial, double tau0) {
  const Grid& grid = fourier_.grid();
  if (initial.wbar.n_modes() != grid.n_modes() ||
      initial.wbar.n_y() != grid.n_y() ||
      initial.A.n_modes() != grid.n_modes())
    throw std::invalid_argument("stepper: state shape mismatch");

  const double dt = config_.dt;
  const double t0 = initial.t;
  const double span = config_.t_end - t0;
  const long long n_steps = std::llround(span / dt);
  if (n_steps < 1 ||
      std::abs(static_cast<double>(n_steps) * dt - span) >
          1e-9 * std::max(1.0, std::abs(span)))
    throw std::invalid_argument("stepper: t_end must be start + k dt");

  RunResult res;
  res.state = initial;
  res.tau = tau0;
  DeckState& s = res.state;

  const std::size_t nn = grid.n_modes() * grid.n_y();
  SpectralField f_prev;
  SurfaceSpectrum g_prev;
  bool have_history = false;

  for (long long step = 0; step < n_steps; ++step) {
    s.t = t0 + static_cast<double>(step) * dt;
    const bool row_step =
        config_.ledger_cadence > 0 &&
        step % static_cast<long long>(config_.ledger_cadence) == 0;
    TermsBundle tb = eval_terms(s, row_step);
    SpectralField f_n = assemble_forcing(tb, s.t);
    SurfaceSpectrum g_n = eval_transport(s);

    NormParams np = config_.norms;
    np.tau = res.tau;
    np.eps = s.eps;
    const CompositeNorms com = composite_norms(grid, s, np);
    const GammaPair gam = gammas(com, s.eps, np.delta, config_.c1, config_.c2);

    if (row_step) {
      push_row(s, res.tau, tb, com, gam, res, s.t);
      if (config_.lemma_cadence > 0 &&
          (res.ledger.size() - 1) % config_.lemma_cadence == 0)
        res.lemmas.push_back(
            {s.t, audit_lemma_bounds(fourier_, s, np, config_.n_threads)});
    }

    // The radius ODE is the shear equation's certificate; with the shear
    // frozen there is nothing to certify and tau is held.
    double tau_next = res.tau;
    if (config_.evolve_wbar) {
      tau_next = advance_tau(res.tau, gam.gamma1, dt);
      if (tau_next <= 0.0) {
        res.reason = StopReason::radius_exhausted;
        finalize_residuals(res.ledger, res.samples);
        return res;
      }
    }

    DeckState next(grid);
    next.eps = s.eps;
    next.t = t0 + static_cast<double>(step + 1) * dt;

    if (!have_history) {
      // Bootstrap: one predictor of each equation, then trapezoid
      // correctors from the original state; same order as the main scheme.
      DeckState pred(grid);
      pred.eps = s.eps;
      pred.t = next.t;
      pred.wbar = config_.evolve_wbar ? strang_step(s.wbar, f_n) : s.wbar;
      {
        SurfaceSpectrum acc = s.A;
        for (std::size_t i = 0; i < grid.n_modes(); ++i)
          acc[i] += dt * g_n[i];
        apply_dispersion(acc);
        pred.A = std::move(acc);
      }
      TermsBundle tb1 = eval_terms(pred, false);
      SpectralField f_1 = assemble_forcing(tb1, pred.t);
      SurfaceSpectrum g_1 = eval_transport(pred);

      if (config_.evolve_wbar) {
        SpectralField f_mid = f_n;
        f_mid += f_1;
        f_mid *= complex(0.5, 0.0);
        next.wbar = strang_step(s.wbar, f_mid);
      } else {
        next.wbar = s.wbar;
      }
      SurfaceSpectrum a1 = s.A;
      apply_dispersion(a1);
      SurfaceSpectrum eg = g_n;
      apply_dispersion(eg);
      for (std::size_t i = 0; i < grid.n_modes(); ++i)
        a1[i] += 0.5 * dt * (eg[i] + g_1[i]);
      next.A = std::move(a1);
    } else {
      if (config_.evolve_wbar) {
        SpectralField f_mid = f_n;
        f_mid *= complex(1.5, 0.0);
        {
          complex* fd = f_mid.data();
          const complex* pd = f_prev.data();
          for (std::size_t q = 0; q < nn; ++q) fd[q] -= 0.5 * pd[q];
        }
        next.wbar = strang_step(s.wbar, f_mid);
      } else {
        next.wbar = s.wbar;
      }
      SurfaceSpectrum eg = g_prev;
      apply_dispersion(eg);
      SurfaceSpectrum acc = s.A;
      for (std::size_t i = 0; i < grid.n_modes(); ++i)
        acc[i] += dt * (1.5 * g_n[i] - 0.5 * eg[i]);
      apply_dispersion(acc);
      next.A = std::move(acc);
    }

    if (has_non_finite(next.wbar) || has_non_finite(next.A)) {
      res.reason = StopReason::blow_up;
      finalize_residuals(res.ledger, res.samples);
      return res;
    }

    s = std::move(next);
    res.tau = tau_next;
    res.steps_taken = static_cast<std::size_t>(step + 1);
    f_prev = std::move(f_n);
    g_prev = std::move(g_n);
    have_history = true;

    if (config_.checkpoint_cadence > 0 && config_.on_checkpoint &&
        (step + 1) % static_cast<long long>(config_.checkpoint_cadence) == 0)
      config_.on_checkpoint(s, res.tau, static_cast<std::size_t>(step + 1));
  }

  if (config_.ledger_cadence > 0) {
    // Closing row at t_end so the window always has both endpoints.
    TermsBundle tb = eval_terms(s, true);
    NormParams np = config_.norms;
    np.tau = res.tau;
    np.eps = s.eps;
    const CompositeNorms com = composite_norms(grid, s, np);
    const GammaPair gam = gammas(com, s.eps, np.delta, config_.c1, config_.c2);
    push_row(s, res.tau, tb, com, gam, res, s.t);
  }
  finalize_residuals(res.ledger, res.samples);
  res.reason = StopReason::completed;
  return res;
}

}  // namespace tdk
