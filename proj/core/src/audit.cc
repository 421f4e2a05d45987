#include "tdk/audit.h"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "tdk/bo.h"
#include "tdk/weights.h"
#include "tdk/ydiff.h"

namespace tdk {

namespace {

double mode_weight(const Grid& grid, std::size_t i, double tau, double r) {
  const double xi = grid.xi(i);
  return grid.dxi() * std::exp(2.0 * tau * std::abs(xi)) *
         std::pow(1.0 + xi * xi, r);
}

std::vector<double> rho_sq_profile(const Grid& grid, double t, double eps) {
  std::vector<double> w(grid.n_y());
  for (std::size_t j = 0; j < grid.n_y(); ++j) {
    const double r = rho(grid.y(j), t, eps);
    w[j] = r * r;
  }
  return w;
}

std::vector<double> chi_sq_rho_sq_profile(const Grid& grid, double t,
                                          double eps) {
  std::vector<double> w = rho_sq_profile(grid, t, eps);
  for (std::size_t j = 0; j < grid.n_y(); ++j) {
    const double c = chi(grid.y(j));
    w[j] *= c * c;
  }
  return w;
}

}  // namespace

double weighted_inner(const Grid& grid, const SpectralField& u,
                      const SpectralField& v, double tau, double r,
                      const std::vector<double>& y_weight_sq) {
  if (u.n_modes() != grid.n_modes() || v.n_modes() != grid.n_modes() ||
      u.n_y() != grid.n_y() || v.n_y() != grid.n_y())
    throw std::invalid_argument("weighted_inner: shape mismatch");
  const std::size_t ny = grid.n_y();
  const double h = grid.dy();
  double total = 0.0;
  for (std::size_t i = 0; i < grid.n_modes(); ++i) {
    const complex* up = u.profile(i);
    const complex* vp = v.profile(i);
    double trapz = 0.0;
    for (std::size_t j = 0; j < ny; ++j) {
      const double w = (j == 0 || j == ny - 1) ? 0.5 * h : h;
      trapz += w * y_weight_sq[j] * (std::conj(vp[j]) * up[j]).real();
    }
    // Empty modes contribute nothing even when the radius weight overflows.
    if (trapz == 0.0) continue;
    total += mode_weight(grid, i, tau, r) * trapz;
  }
  return total;
}

double weighted_inner(const Grid& grid, const SurfaceSpectrum& u,
                      const SurfaceSpectrum& v, double tau, double r) {
  if (u.n_modes() != grid.n_modes() || v.n_modes() != grid.n_modes())
    throw std::invalid_argument("weighted_inner: shape mismatch");
  double total = 0.0;
  for (std::size_t i = 0; i < grid.n_modes(); ++i) {
    const double p = (std::conj(v[i]) * u[i]).real();
    if (p == 0.0) continue;
    total += mode_weight(grid, i, tau, r) * p;
  }
  return total;
}

double oddness_scalar_shear(const Grid& grid, const SpectralField& wbar,
                            double tau, double r, double t, double eps) {
  const std::vector<double> w = rho_sq_profile(grid, t, eps);
  const std::size_t ny = grid.n_y();
  const double h = grid.dy();
  double odd = 0.0, even = 0.0;
  for (std::size_t i = 0; i < grid.n_modes(); ++i) {
    const complex* p = wbar.profile(i);
    double trapz = 0.0;
    for (std::size_t j = 0; j < ny; ++j) {
      const double ww = (j == 0 || j == ny - 1) ? 0.5 * h : h;
      trapz += ww * w[j] * std::norm(p[j]);
    }
    if (trapz == 0.0) continue;
    const double base = mode_weight(grid, i, tau, r) * trapz;
    odd += grid.xi(i) * base;
    even += std::abs(grid.xi(i)) * base;
  }
  return even > 0.0 ? odd / even : 0.0;
}

double oddness_scalar_vorticity(const Grid& grid, const SpectralField& dy_wbar,
                                double tau, double r, double t, double eps) {
  const std::vector<double> w = chi_sq_rho_sq_profile(grid, t, eps);
  const std::size_t ny = grid.n_y();
  const double h = grid.dy();
  double odd = 0.0, even = 0.0;
  for (std::size_t i = 0; i < grid.n_modes(); ++i) {
    const complex* p = dy_wbar.profile(i);
    double trapz = 0.0;
    for (std::size_t j = 0; j < ny; ++j) {
      const double ww = (j == 0 || j == ny - 1) ? 0.5 * h : h;
      trapz += ww * grid.y(j) * w[j] * std::norm(p[j]);
    }
    if (trapz == 0.0) continue;
    const double base = mode_weight(grid, i, tau, r - 0.5) * trapz;
    odd += grid.xi(i) * base;
    even += std::abs(grid.xi(i)) * base;
  }
  return even > 0.0 ? odd / even : 0.0;
}

namespace {

double norm_sq_of(const Grid& grid, const SpectralField& f, double tau,
                  double r, double t, double eps) {
  const double n = norm_tau_r(grid, f, tau, r, t, eps, nullptr);
  return n * n;
}

}  // namespace

AuditSample compute_audit_sample(
    const Fourier& fourier, const DeckState& state, const ThetaBank& bank,
    double tau, double r, const SpectralField& n_term,
    const SpectralField& l_term, const SpectralField& m_term,
    const SpectralField& b_term, const SpectralField* source_w,
    const SurfaceSpectrum* source_A, int n_threads, LedgerRow& row) {
  const Grid& grid = fourier.grid();
  const double t = state.t, eps = state.eps;
  const double s = 1.0 + t / eps;
  const double damp_factor = 1.0 / (8.0 * eps * s * s);

  const std::vector<double> rho_sq = rho_sq_profile(grid, t, eps);
  const std::vector<double> chi_rho_sq = chi_sq_rho_sq_profile(grid, t, eps);
  std::vector<double> y_nodes = grid.y_nodes();
  std::vector<double> chi_nodes = chi_profile(grid);

  AuditSample sample;

  // Shear-balance couplings: the four term fields against wbar.
  row.T_N = weighted_inner(grid, n_term, state.wbar, tau, r, rho_sq);
  row.T_L = weighted_inner(grid, l_term, state.wbar, tau, r, rho_sq);
  row.T_M = weighted_inner(grid, m_term, state.wbar, tau, r, rho_sq);
  row.T_B = weighted_inner(grid, b_term, state.wbar, tau, r, rho_sq);

  // Displacement balance: the column coupling and the transport term.
  {
    SurfaceSpectrum column(grid);
    integrate_y_full(grid, state.wbar, column);
    for (std::size_t i = 0; i < grid.n_modes(); ++i)
      column[i] *= complex(0.0, grid.xi(i));
    row.T_A1 = weighted_inner(grid, column, state.A, tau, r);
    row.T_A2 =
        -weighted_inner(grid, bo_quadratic(fourier, state.A), state.A, tau, r);
  }

  // Vorticity balance: the differentiated term family against dy wbar.
  SpectralField dy_w(grid);
  ddy(grid, state.wbar, dy_w);
  {
    DyTerms dys = dy_terms(fourier, state.wbar, state.A, bank, t, eps,
                           n_threads);
    row.T_dyN = weighted_inner(grid, dys.dyN, dy_w, tau, r - 0.5, chi_rho_sq);
    row.T_dyL = weighted_inner(grid, dys.dyL, dy_w, tau, r - 0.5, chi_rho_sq);
    row.T_dyM = weighted_inner(grid, dys.dyM, dy_w, tau, r - 0.5, chi_rho_sq);
    row.T_dyB = weighted_inner(grid, dys.dyB, dy_w, tau, r - 0.5, chi_rho_sq);
  }

  // Displacement sample scalars.
  {
    const double n = norm_tilde(grid, state.A, tau, r, nullptr);
    sample.half_A_sq = 0.5 * n * n;
    SurfaceSpectrum half = state.A;
    apply_half_x_derivative(grid, half);
    const double nd = norm_tilde(grid, half, tau, r, nullptr);
    sample.diss_A_sq = nd * nd;
    sample.rhs_A = row.T_A1 - row.T_A2;
    if (source_A != nullptr)
      sample.rhs_A += weighted_inner(grid, *source_A, state.A, tau, r);
  }

  // Assembled discrete shear tendency: compact diffusion + transport phase
  // - terms (+ source); the same generator the stepper follows.
  SpectralField rhs_w(grid);
  numerov_d2dy2(grid, state.wbar, rhs_w);
  for (std::size_t i = 0; i < grid.n_modes(); ++i) {
    const double xi = grid.xi(i);
    const complex* wp = state.wbar.profile(i);
    complex* rp = rhs_w.profile(i);
    for (std::size_t j = 0; j < grid.n_y(); ++j)
      rp[j] -= complex(0.0, xi * y_nodes[j]) * wp[j];
  }
  rhs_w -= n_term;
  rhs_w -= l_term;
  rhs_w -= m_term;
  rhs_w -= b_term;
  if (source_w != nullptr) rhs_w += *source_w;

  // Shear sample scalars.
  {
    sample.half_w_sq = 0.5 * norm_sq_of(grid, state.wbar, tau, r, t, eps);
    SpectralField half = state.wbar;
    apply_half_x_derivative(grid, half);
    sample.diss_w_sq = norm_sq_of(grid, half, tau, r, t, eps);
    SpectralField yw = state.wbar;
    scale_by_y_profile(grid, y_nodes, yw);
    sample.damp_w = damp_factor * norm_sq_of(grid, yw, tau, r, t, eps);
    sample.rhs_w = weighted_inner(grid, rhs_w, state.wbar, tau, r, rho_sq);
  }

  // Vorticity sample scalars at the lagging exponent.
  {
    SpectralField chi_dy = dy_w;
    scale_by_y_profile(grid, chi_nodes, chi_dy);
    sample.half_vort_sq =
        0.5 * norm_sq_of(grid, chi_dy, tau, r - 0.5, t, eps);
    SpectralField half = chi_dy;
    apply_half_x_derivative(grid, half);
    sample.diss_vort_sq = norm_sq_of(grid, half, tau, r - 0.5, t, eps);
    SpectralField y_chi_dy = chi_dy;
    scale_by_y_profile(grid, y_nodes, y_chi_dy);
    sample.damp_vort =
        damp_factor * norm_sq_of(grid, y_chi_dy, tau, r - 0.5, t, eps);
    SpectralField dy_rhs(grid);
    ddy(grid, rhs_w, dy_rhs);
    sample.rhs_vort =
        weighted_inner(grid, dy_rhs, dy_w, tau, r - 0.5, chi_rho_sq);
  }

  sample.odd_shear = oddness_scalar_shear(grid, state.wbar, tau, r, t, eps);
  sample.odd_vort = oddness_scalar_vorticity(grid, dy_w, tau, r, t, eps);
  return sample;
}

void finalize_residuals(EnergyLedger& ledger,
                        const std::vector<AuditSample>& samples) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  if (ledger.rows.size() != samples.size())
    throw std::invalid_argument("finalize_residuals: sample count mismatch");
  for (LedgerRow& row : ledger.rows) {
    row.residual_A = nan;
    row.residual_w = nan;
    row.residual_vort = nan;
  }
  if (ledger.rows.size() < 3) return;

  for (std::size_t n = 1; n + 1 < ledger.rows.size(); ++n) {
    const LedgerRow& prev = ledger.rows[n - 1];
    const LedgerRow& next = ledger.rows[n + 1];
    const double span = next.t - prev.t;
    // Slope of the ledger's own tau column; the explicit radius update makes
    // this the quadrature-consistent radius rate.
    const double tau_slope = (next.tau - prev.tau) / span;

    const AuditSample& sp = samples[n - 1];
    const AuditSample& sc = samples[n];
    const AuditSample& sn = samples[n + 1];
    LedgerRow& row = ledger.rows[n];

    row.residual_A = (sn.half_A_sq - sp.half_A_sq) / span -
                     tau_slope * sc.diss_A_sq - sc.rhs_A;
    row.residual_w = (sn.half_w_sq - sp.half_w_sq) / span -
                     tau_slope * sc.diss_w_sq + sc.damp_w - sc.rhs_w;
    row.residual_vort = (sn.half_vort_sq - sp.half_vort_sq) / span -
                        tau_slope * sc.diss_vort_sq + sc.damp_vort -
                        sc.rhs_vort;
  }
}

std::vector<LemmaRatio> audit_lemma_bounds(const Fourier& fourier,
                                           const DeckState& state,
                                           const NormParams& params,
                                           int n_threads) {
  const Grid& grid = fourier.grid();
  const double tau = params.tau, r = params.r;
  const double t = state.t, eps = state.eps;

  ThetaBank bank = make_theta_bank(grid, t, eps);
  const std::vector<double> rho_sq = rho_sq_profile(grid, t, eps);
  const std::vector<double> chi_rho_sq = chi_sq_rho_sq_profile(grid, t, eps);
  std::vector<double> y_nodes = grid.y_nodes();
  std::vector<double> chi_nodes = chi_profile(grid);

  SpectralField dy_w(grid);
  ddy(grid, state.wbar, dy_w);
  SpectralField dyy_w(grid);
  d2dy2(grid, state.wbar, dyy_w);

  // The norm battery entering the ten majorants.
  const double n_w = norm_tau_r(grid, state.wbar, tau, r, t, eps, nullptr);
  const double n_dyw = norm_tau_r(grid, dy_w, tau, r, t, eps, nullptr);
  double n_hw, n_bw, n_ha, n_ba;
  {
    SpectralField f = state.wbar;
    apply_half_x_derivative(grid, f);
    n_hw = norm_tau_r(grid, f, tau, r, t, eps, nullptr);
  }
  {
    SpectralField f = state.wbar;
    apply_half_x_bracket(grid, f);
    n_bw = norm_tau_r(grid, f, tau, r, t, eps, nullptr);
  }
  const double n_a = norm_tilde(grid, state.A, tau, r, nullptr);
  {
    SurfaceSpectrum g = state.A;
    apply_half_x_derivative(grid, g);
    n_ha = norm_tilde(grid, g, tau, r, nullptr);
  }
  {
    SurfaceSpectrum g = state.A;
    apply_half_x_bracket(grid, g);
    n_ba = norm_tilde(grid, g, tau, r, nullptr);
  }

  SpectralField chi_dy = dy_w;
  scale_by_y_profile(grid, chi_nodes, chi_dy);
  const double n_chidy =
      norm_tau_r(grid, chi_dy, tau, r - 0.5, t, eps, nullptr);
  double n_ychidy, n_chidyy, n_bchidy, n_hchidy;
  {
    SpectralField f = chi_dy;
    scale_by_y_profile(grid, y_nodes, f);
    n_ychidy = norm_tau_r(grid, f, tau, r - 0.5, t, eps, nullptr);
  }
  {
    SpectralField f = dyy_w;
    scale_by_y_profile(grid, chi_nodes, f);
    n_chidyy = norm_tau_r(grid, f, tau, r - 0.5, t, eps, nullptr);
  }
  {
    SpectralField f = chi_dy;
    apply_half_x_bracket(grid, f);
    n_bchidy = norm_tau_r(grid, f, tau, r - 0.5, t, eps, nullptr);
  }
  {
    SpectralField f = chi_dy;
    apply_half_x_derivative(grid, f);
    n_hchidy = norm_tau_r(grid, f, tau, r - 0.5, t, eps, nullptr);
  }

  // The T values themselves.
  LedgerRow row;
  compute_audit_sample(fourier, state, bank, tau, r,
                       term_N(fourier, state.wbar),
                       term_L(grid, state.wbar, state.A, bank, n_threads),
                       term_M(grid, state.wbar, state.A, bank, n_threads),
                       term_B(fourier, state.wbar, state.A, bank, t, eps,
                              n_threads),
                       nullptr, nullptr, n_threads, row);

  const auto make = [](const char* label, double t_value, double bound) {
    LemmaRatio rec;
    rec.label = label;
    rec.t_value = std::abs(t_value);
    rec.bound = bound;
    rec.active = bound > 0.0;
    rec.ratio = rec.active ? rec.t_value / bound : 0.0;
    return rec;
  };

  std::vector<LemmaRatio> out;
  out.push_back(make("T_A1", row.T_A1, n_hw * n_ha));
  out.push_back(make("T_A2", row.T_A2, n_ha * n_ha * n_a + n_ha * n_a * n_a));
  out.push_back(make("T_N", row.T_N, n_hw * n_bw * n_dyw));
  out.push_back(make("T_L", row.T_L,
                     n_hw * n_w * n_ha + (n_w * n_w + n_hw * n_hw) * n_a));
  out.push_back(make("T_M", row.T_M, n_bw * n_ba * (n_dyw + n_ychidy)));
  out.push_back(make("T_B", row.T_B,
                     n_w * n_a / eps + n_ba * n_dyw + n_hw * n_hw +
                         n_hw * n_w + n_bw * n_ha * n_a));
  out.push_back(make("T_dyN", row.T_dyN,
                     n_bchidy * n_bchidy * n_dyw + n_chidyy * n_chidy * n_bw));
  out.push_back(make("T_dyL", row.T_dyL,
                     n_chidy * n_chidy * n_ha + n_chidy * n_bw * n_a +
                         n_hchidy * n_bchidy * n_a));
  out.push_back(make("T_dyM", row.T_dyM,
                     n_chidy * n_chidy * n_ha + n_ychidy * n_chidyy * n_ha));
  out.push_back(make("T_dyB", row.T_dyB,
                     n_a * n_chidy / eps + n_bw * n_chidy + n_ba * n_chidy +
                         n_a * n_a * n_chidy + n_ha * n_a * n_chidy));
  return out;
}

}  // namespace tdk
