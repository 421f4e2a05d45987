#include "tdk/weights.h"

#include <cmath>

namespace tdk {

namespace {

inline double bracket_sq(double xi) { return 1.0 + xi * xi; }

inline double gaussian_core(double xi, double y, double s) {
  return std::exp(-y * y * bracket_sq(xi) / (2.0 * s));
}

}  // namespace

double rho(double y, double t, double eps) {
  const double s = 1.0 + t / eps;
  return std::exp(y * y / (8.0 * s));
}

double dlog_rho_dt(double y, double t, double eps) {
  const double s = 1.0 + t / eps;
  return -y * y / (8.0 * eps * s * s);
}

double theta(double xi, double y, double t, double eps) {
  const double s = 1.0 + t / eps;
  return 1.0 - gaussian_core(xi, y, s);
}

double dtheta_dy(double xi, double y, double t, double eps) {
  const double s = 1.0 + t / eps;
  return y * bracket_sq(xi) / s * gaussian_core(xi, y, s);
}

double d2theta_dy2(double xi, double y, double t, double eps) {
  const double s = 1.0 + t / eps;
  const double b2 = bracket_sq(xi);
  return b2 / s * gaussian_core(xi, y, s) * (1.0 - y * y * b2 / s);
}

double d3theta_dy3(double xi, double y, double t, double eps) {
  const double s = 1.0 + t / eps;
  const double b2 = bracket_sq(xi);
  return -y * b2 * b2 / (s * s) * gaussian_core(xi, y, s) *
         (3.0 - y * y * b2 / s);
}

double dtheta_dt(double xi, double y, double t, double eps) {
  const double s = 1.0 + t / eps;
  const double b2 = bracket_sq(xi);
  return -y * y * b2 / (2.0 * eps * s * s) * gaussian_core(xi, y, s);
}

double d2theta_dydt(double xi, double y, double t, double eps) {
  const double s = 1.0 + t / eps;
  const double b2 = bracket_sq(xi);
  return y * b2 / (eps * s * s) * gaussian_core(xi, y, s) *
         (y * y * b2 / (2.0 * s) - 1.0);
}

double c_theta(double xi, double t, double eps) {
  const double s = 1.0 + t / eps;
  return std::sqrt(2.0 * M_PI * s) / (2.0 * std::sqrt(bracket_sq(xi)));
}

double int_one_minus_theta(double xi, double y, double t, double eps) {
  const double s = 1.0 + t / eps;
  const double b = std::sqrt(bracket_sq(xi));
  return std::sqrt(M_PI * s / 2.0) / b * std::erf(y * b / std::sqrt(2.0 * s));
}

double c_theta_discrete(const Grid& grid, double xi, double t, double eps) {
  const double h = grid.dy();
  double acc = 0.0;
  double prev = theta(xi, grid.y(0), t, eps);
  for (std::size_t j = 1; j < grid.n_y(); ++j) {
    const double cur = theta(xi, grid.y(j), t, eps);
    acc += 0.5 * h * (prev + cur);
    prev = cur;
  }
  return grid.y_max() - acc;
}

double chi(double y) {
  if (y <= 1.0) return 0.0;
  if (y >= 6.0) return 1.0;
  const double u = (y - 1.0) / 5.0;
  return ((6.0 * u - 15.0) * u + 10.0) * u * u * u;
}

double chi_prime(double y) {
  if (y <= 1.0 || y >= 6.0) return 0.0;
  const double u = (y - 1.0) / 5.0;
  return 6.0 * u * u * (1.0 - u) * (1.0 - u);
}

HardyReport hardy_check(const Grid& grid, const std::vector<double>& f,
                        double t, double eps) {
  const std::size_t ny = grid.n_y();
  const double h = grid.dy();
  const double s = 1.0 + t / eps;

  std::vector<double> df(ny);
  df[0] = (-1.5 * f[0] + 2.0 * f[1] - 0.5 * f[2]) / h;
  for (std::size_t j = 1; j + 1 < ny; ++j)
    df[j] = (f[j + 1] - f[j - 1]) / (2.0 * h);
  df[ny - 1] = (1.5 * f[ny - 1] - 2.0 * f[ny - 2] + 0.5 * f[ny - 3]) / h;

  double rho_f_sq = 0.0, y_rho_f_sq = 0.0, rho_df_sq = 0.0;
  for (std::size_t j = 0; j < ny; ++j) {
    const double w = (j == 0 || j == ny - 1) ? 0.5 * h : h;
    const double y = grid.y(j);
    const double r = rho(y, t, eps);
    rho_f_sq += w * r * r * f[j] * f[j];
    y_rho_f_sq += w * y * y * r * r * f[j] * f[j];
    rho_df_sq += w * r * r * df[j] * df[j];
  }

  HardyReport rep;
  rep.lhs = rho_f_sq + y_rho_f_sq / (4.0 * s);
  rep.rhs = 4.0 * s * rho_df_sq;
  rep.satisfied = rep.lhs <= rep.rhs * (1.0 + 1e-8);
  return rep;
}

LiftBoundsReport lift_bounds_check(double xi, double t, double eps,
                                   std::size_t n_quad, double y_max) {
  const double h = y_max / static_cast<double>(n_quad - 1);
  double weight_sq = 0.0, dtheta_sq = 0.0, ydyy_sq = 0.0;
  for (std::size_t j = 0; j < n_quad; ++j) {
    const double w = (j == 0 || j == n_quad - 1) ? 0.5 * h : h;
    const double y = h * static_cast<double>(j);
    const double r = rho(y, t, eps);
    const double one_minus = 1.0 - theta(xi, y, t, eps);
    const double dt_theta = dtheta_dt(xi, y, t, eps);
    const double dyy = d2theta_dy2(xi, y, t, eps);
    weight_sq += w * one_minus * one_minus * r * r;
    dtheta_sq += w * r * r * dt_theta * dt_theta;
    ydyy_sq += w * y * y * r * r * r * r * dyy * dyy;
  }
  const double bracket = std::sqrt(bracket_sq(xi));
  LiftBoundsReport rep;
  rep.k_weight = std::sqrt(weight_sq) * std::sqrt(bracket);
  rep.k_dtheta = std::sqrt(dtheta_sq) * eps * std::sqrt(bracket);
  rep.k_ydyy = std::sqrt(ydyy_sq) / std::sqrt(bracket);
  return rep;
}

ThetaBank make_theta_bank(const Grid& grid, double t, double eps) {
  ThetaBank bank;
  bank.n_modes = grid.n_modes();
  bank.n_y = grid.n_y();
  const std::size_t total = bank.n_modes * bank.n_y;
  bank.theta.resize(total);
  bank.dtheta_dy.resize(total);
  bank.d2theta_dy2.resize(total);
  bank.d3theta_dy3.resize(total);
  bank.dtheta_dt.resize(total);
  bank.d2theta_dydt.resize(total);
  bank.int_theta.resize(total);
  bank.c_disc.resize(bank.n_modes);

  const double h = grid.dy();
  for (std::size_t i = 0; i < bank.n_modes; ++i) {
    const double xi = grid.xi(i);
    double* th = bank.theta.data() + i * bank.n_y;
    double* acc = bank.int_theta.data() + i * bank.n_y;
    for (std::size_t j = 0; j < bank.n_y; ++j) {
      const double y = grid.y(j);
      th[j] = theta(xi, y, t, eps);
      bank.dtheta_dy[i * bank.n_y + j] = dtheta_dy(xi, y, t, eps);
      bank.d2theta_dy2[i * bank.n_y + j] = d2theta_dy2(xi, y, t, eps);
      bank.d3theta_dy3[i * bank.n_y + j] = d3theta_dy3(xi, y, t, eps);
      bank.dtheta_dt[i * bank.n_y + j] = dtheta_dt(xi, y, t, eps);
      bank.d2theta_dydt[i * bank.n_y + j] = d2theta_dydt(xi, y, t, eps);
    }
    acc[0] = 0.0;
    for (std::size_t j = 1; j < bank.n_y; ++j)
      acc[j] = acc[j - 1] + 0.5 * h * (th[j - 1] + th[j]);
    bank.c_disc[i] = c_theta_discrete(grid, xi, t, eps);
  }
  return bank;
}

std::vector<double> rho_profile(const Grid& grid, double t, double eps) {
  std::vector<double> out(grid.n_y());
  for (std::size_t j = 0; j < grid.n_y(); ++j)
    out[j] = rho(grid.y(j), t, eps);
  return out;
}

std::vector<double> chi_profile(const Grid& grid) {
  std::vector<double> out(grid.n_y());
  for (std::size_t j = 0; j < grid.n_y(); ++j) out[j] = chi(grid.y(j));
  return out;
}

}  // namespace tdk
