#include "tdk/norms.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "tdk/weights.h"
#include "tdk/ydiff.h"

namespace tdk {

namespace {

struct LogSum {
  double max_log = -std::numeric_limits<double>::infinity();
  std::vector<double> logs;
  std::vector<bool> top_band;

  void add(double log_term, bool in_top_band) {
    if (!std::isfinite(log_term)) return;
    logs.push_back(log_term);
    top_band.push_back(in_top_band);
    if (log_term > max_log) max_log = log_term;
  }

  /// Returns sqrt of the accumulated sum; flags when the top band holds
  /// more than 1% of it.
  double finish(bool* under_resolved) const {
    if (logs.empty()) {
      if (under_resolved != nullptr) *under_resolved = false;
      return 0.0;
    }
    double total = 0.0, top = 0.0;
    for (std::size_t i = 0; i < logs.size(); ++i) {
      const double e = std::exp(logs[i] - max_log);
      total += e;
      if (top_band[i]) top += e;
    }
    if (under_resolved != nullptr) *under_resolved = top > 0.01 * total;
    return std::exp(0.5 * (max_log + std::log(total)));
  }
};

bool in_top_third(const Grid& grid, std::size_t i) {
  const long k = std::labs(grid.wavenumber(i));
  return 3 * k >= static_cast<long>(grid.n_modes());
}

double mode_weight_log(double xi, double tau, double r) {
  return 2.0 * tau * std::abs(xi) + r * std::log1p(xi * xi);
}

}  // namespace

double norm_tau_r(const Grid& grid, const SpectralField& f, double tau,
                  double r, double t, double eps, bool* under_resolved) {
  if (f.n_modes() != grid.n_modes() || f.n_y() != grid.n_y())
    throw std::invalid_argument("norm_tau_r: field shape does not match grid");
  const std::size_t ny = grid.n_y();
  const double h = grid.dy();
  std::vector<double> rho_sq(ny);
  for (std::size_t j = 0; j < ny; ++j) {
    const double rr = rho(grid.y(j), t, eps);
    rho_sq[j] = rr * rr;
  }

  LogSum sum;
  const double log_dxi = std::log(grid.dxi());
  for (std::size_t i = 0; i < grid.n_modes(); ++i) {
    const complex* profile = f.profile(i);
    double trapz = 0.0;
    for (std::size_t j = 0; j < ny; ++j) {
      const double w = (j == 0 || j == ny - 1) ? 0.5 * h : h;
      trapz += w * rho_sq[j] * std::norm(profile[j]);
    }
    if (trapz <= 0.0) continue;
    sum.add(mode_weight_log(grid.xi(i), tau, r) + std::log(trapz) + log_dxi,
            in_top_third(grid, i));
  }
  return sum.finish(under_resolved);
}

double norm_tilde(const Grid& grid, const SurfaceSpectrum& g, double tau,
                  double r, bool* under_resolved) {
  if (g.n_modes() != grid.n_modes())
    throw std::invalid_argument("norm_tilde: spectrum does not match grid");
  LogSum sum;
  const double log_dxi = std::log(grid.dxi());
  for (std::size_t i = 0; i < grid.n_modes(); ++i) {
    const double mag_sq = std::norm(g[i]);
    if (mag_sq <= 0.0) continue;
    sum.add(mode_weight_log(grid.xi(i), tau, r) + std::log(mag_sq) + log_dxi,
            in_top_third(grid, i));
  }
  return sum.finish(under_resolved);
}

void scale_by_y_profile(const Grid& grid, const std::vector<double>& profile,
                        SpectralField& f) {
  if (profile.size() != grid.n_y())
    throw std::invalid_argument("scale_by_y_profile: profile length mismatch");
  for (std::size_t i = 0; i < grid.n_modes(); ++i) {
    complex* row = f.profile(i);
    for (std::size_t j = 0; j < grid.n_y(); ++j) row[j] *= profile[j];
  }
}

namespace {

void apply_real_multiplier(const Grid& grid, SpectralField& f,
                           double (*symbol)(double)) {
  for (std::size_t i = 0; i < grid.n_modes(); ++i) {
    const double m = symbol(grid.xi(i));
    complex* row = f.profile(i);
    for (std::size_t j = 0; j < grid.n_y(); ++j) row[j] *= m;
  }
}

void apply_real_multiplier(const Grid& grid, SurfaceSpectrum& f,
                           double (*symbol)(double)) {
  for (std::size_t i = 0; i < grid.n_modes(); ++i) f[i] *= symbol(grid.xi(i));
}

double half_derivative_symbol(double xi) { return std::sqrt(std::abs(xi)); }
double half_bracket_symbol(double xi) {
  return std::pow(1.0 + xi * xi, 0.25);
}

}  // namespace

void apply_half_x_derivative(const Grid& grid, SpectralField& f) {
  apply_real_multiplier(grid, f, half_derivative_symbol);
}
void apply_half_x_derivative(const Grid& grid, SurfaceSpectrum& f) {
  apply_real_multiplier(grid, f, half_derivative_symbol);
}
void apply_half_x_bracket(const Grid& grid, SpectralField& f) {
  apply_real_multiplier(grid, f, half_bracket_symbol);
}
void apply_half_x_bracket(const Grid& grid, SurfaceSpectrum& f) {
  apply_real_multiplier(grid, f, half_bracket_symbol);
}

CompositeNorms composite_norms(const Grid& grid, const DeckState& state,
                               const NormParams& params) {
  const double tau = params.tau, r = params.r;
  const double t = state.t, eps = state.eps;
  const double inv_delta = 1.0 / params.delta;

  std::vector<double> chi_w = chi_profile(grid);
  std::vector<double> y_w(grid.n_y()), y_chi_w(grid.n_y());
  for (std::size_t j = 0; j < grid.n_y(); ++j) {
    y_w[j] = grid.y(j);
    y_chi_w[j] = grid.y(j) * chi_w[j];
  }

  SpectralField dy_w(grid), dyy_w(grid);
  ddy(grid, state.wbar, dy_w);
  d2dy2(grid, state.wbar, dyy_w);

  CompositeNorms out;
  bool flag = false, f = false;

  // X and its constituents.
  out.X = norm_tau_r(grid, state.wbar, tau, r, t, eps, &f);
  flag |= f;
  {
    SpectralField chi_dy = dy_w;
    scale_by_y_profile(grid, chi_w, chi_dy);
    out.X += inv_delta * norm_tau_r(grid, chi_dy, tau, r - 0.5, t, eps, &f);
    flag |= f;
  }
  out.X += norm_tilde(grid, state.A, tau, r, &f);
  flag |= f;

  // Y: the same three slots with a half x-derivative inserted.
  {
    SpectralField half_w = state.wbar;
    apply_half_x_derivative(grid, half_w);
    out.Y = norm_tau_r(grid, half_w, tau, r, t, eps, nullptr);

    SpectralField half_dy = dy_w;
    apply_half_x_derivative(grid, half_dy);
    scale_by_y_profile(grid, chi_w, half_dy);
    out.Y += inv_delta * norm_tau_r(grid, half_dy, tau, r - 0.5, t, eps, nullptr);

    SurfaceSpectrum half_a = state.A;
    apply_half_x_derivative(grid, half_a);
    out.Y += norm_tilde(grid, half_a, tau, r, nullptr);
  }

  // Z: one more y-derivative in both slots.
  out.Z = norm_tau_r(grid, dy_w, tau, r, t, eps, nullptr);
  {
    SpectralField chi_dyy = dyy_w;
    scale_by_y_profile(grid, chi_w, chi_dyy);
    out.Z += inv_delta * norm_tau_r(grid, chi_dyy, tau, r - 0.5, t, eps, nullptr);
  }

  // H: one y-weight in both slots.
  {
    SpectralField y_wbar = state.wbar;
    scale_by_y_profile(grid, y_w, y_wbar);
    out.H = norm_tau_r(grid, y_wbar, tau, r, t, eps, nullptr);

    SpectralField y_chi_dy = dy_w;
    scale_by_y_profile(grid, y_chi_w, y_chi_dy);
    out.H += inv_delta * norm_tau_r(grid, y_chi_dy, tau, r - 0.5, t, eps, nullptr);
  }

  out.under_resolved = flag;
  return out;
}

double total_energy(const EnergyLedger& ledger, double eps, std::size_t count) {
  if (count == 0 || ledger.rows.empty())
    throw std::invalid_argument("total_energy: empty ledger slice");
  count = std::min(count, ledger.rows.size());

  double sup_x_sq = 0.0;
  for (std::size_t i = 0; i < count; ++i)
    sup_x_sq = std::max(sup_x_sq, ledger.rows[i].X * ledger.rows[i].X);

  double int_y = 0.0, int_z = 0.0, int_h = 0.0;
  for (std::size_t i = 1; i < count; ++i) {
    const LedgerRow& a = ledger.rows[i - 1];
    const LedgerRow& b = ledger.rows[i];
    const double half_dt = 0.5 * (b.t - a.t);
    int_y += half_dt * (a.Y * a.Y + b.Y * b.Y);
    int_z += half_dt * (a.Z * a.Z + b.Z * b.Z);
    int_h += half_dt * (a.H * a.H + b.H * b.H);
  }
  return sup_x_sq + int_y + int_z / 16.0 + int_h / (64.0 * eps);
}

GammaPair gammas(const CompositeNorms& norms, double eps, double delta,
                 double c1, double c2) {
  const double core = 1.0 / eps + norms.Z / 4.0 + norms.X + delta * norms.H;
  GammaPair g;
  g.gamma1 = c1 * (norms.H * norms.H + core);
  g.gamma2 = c2 * core;
  return g;
}

double advance_tau(double tau, double gamma1, double dt) {
  return tau - dt * (gamma1 + 1.0);
}

double select_delta(const EstimateConstants& constants) {
  return std::sqrt(constants.c0_tilde / (1.0 / 16.0 - 1.0 / 100.0));
}

SelectedParams select_parameters(double e0, double tau0,
                                 const EstimateConstants& constants) {
  if (!(e0 > 0.0) || !(tau0 > 0.0))
    throw std::invalid_argument("select_parameters: E0 and tau0 must be positive");

  SelectedParams out;
  out.delta = select_delta(constants);
  out.eps = std::min(1.0 / 64.0, tau0 / (12.0 * constants.c1 * e0));

  const double delta = out.delta, eps = out.eps;
  const double c1 = constants.c1, c2 = constants.c2;
  const auto admissible = [&](double T) {
    const double quarter = std::pow(T, 0.25);
    const double half = std::sqrt(T);
    const bool b = quarter * c2 * (1.0 + delta) * (half / eps + 1.0) <= 1.0;
    const bool c = half * c1 * (1.0 + delta) * (half + 1.0) *
                       std::sqrt(1.5 * e0) <=
                   tau0 / 8.0;
    const bool d = T <= tau0 / 4.0;
    const bool e = quarter * (1.0 + std::pow(e0, 0.25)) <= 1.0 / 16.0;
    return b && c && d && e;
  };

  if (admissible(eps)) {
    out.t_star = eps;
  } else {
    double lo = 0.0, hi = eps;
    for (int iter = 0; iter < 200; ++iter) {
      const double mid = 0.5 * (lo + hi);
      if (admissible(mid))
        lo = mid;
      else
        hi = mid;
    }
    out.t_star = lo;
  }
  out.feasible = out.t_star > 1e-12;
  return out;
}

}  // namespace tdk
