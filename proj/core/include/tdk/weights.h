#pragma once

#include <cstddef>
#include <vector>

#include "tdk/grid.h"

namespace tdk {

/// Parameters of the time-dependent Gaussian weight and lift family.  The
/// relaxation parameter eps must satisfy eps <= 1/64 in certified runs and
/// those runs keep t <= eps.
struct WeightParams {
  double eps = 1.0 / 64.0;
  double t = 0.0;
  double s() const { return 1.0 + t / eps; }
};

/// Gaussian weight exp(y^2 / (8(1+t/eps))); independent of x.
double rho(double y, double t, double eps);

/// d/dt log rho = -y^2 / (8 eps (1+t/eps)^2).
double dlog_rho_dt(double y, double t, double eps);

/// Lift theta_xi = 1 - exp(-y^2 <xi>^2 / (2(1+t/eps))) with <xi>^2 = 1+xi^2,
/// and its closed-form derivatives.  theta at t=0 does not depend on eps.
double theta(double xi, double y, double t, double eps);
double dtheta_dy(double xi, double y, double t, double eps);
double d2theta_dy2(double xi, double y, double t, double eps);
double d3theta_dy3(double xi, double y, double t, double eps);
double dtheta_dt(double xi, double y, double t, double eps);
double d2theta_dydt(double xi, double y, double t, double eps);

/// Full-line integral of 1 - theta_xi: sqrt(2 pi (1+t/eps)) / (2 <xi>).
double c_theta(double xi, double t, double eps);

/// Partial integral int_0^y (1 - theta_xi) dy' in closed form (erf).
double int_one_minus_theta(double xi, double y, double t, double eps);

/// Trapezoid value of int_0^{y_max} (1 - theta_xi) dy on the grid's y-nodes.
/// Every dynamical use of the column constant goes through this function so
/// that discrete identities between the displacement equation and the
/// remainder term close to round-off.
double c_theta_discrete(const Grid& grid, double xi, double t, double eps);

/// Vorticity cutoff: 0 on [0,1], 1 on [6,inf), quintic smoothstep between;
/// C^2 with 0 <= chi' <= 0.375.
double chi(double y);
double chi_prime(double y);

/// Weighted Hardy inequality check on a sampled profile:
///   ||rho f||^2 + (1/(4(1+t/eps))) ||y rho f||^2  <=  4(1+t/eps) ||rho f'||^2
/// with trapezoid quadrature and central-difference f'.
struct HardyReport {
  double lhs = 0.0;
  double rhs = 0.0;
  bool satisfied = false;
};
HardyReport hardy_check(const Grid& grid, const std::vector<double>& f,
                        double t, double eps);

/// Fitted constants of the three lift estimates used by the a-priori bounds:
///   ||(1-theta) rho||_{L2y}        <= k_weight  / <xi>^{1/2}
///   ||rho dtheta/dt||_{L2y}        <= k_dtheta  / (eps <xi>^{1/2})
///   ||y rho^2 d2theta/dy2||_{L2y}  <= k_ydyy * <xi>^{1/2}
/// Each k is the quadrature value of the left side times the inverted shape
/// factor; uniformity in xi is what audits assert, never magnitude.
struct LiftBoundsReport {
  double k_weight = 0.0;
  double k_dtheta = 0.0;
  double k_ydyy = 0.0;
};
LiftBoundsReport lift_bounds_check(double xi, double t, double eps,
                                   std::size_t n_quad = 2048,
                                   double y_max = 12.0);

/// Per-mode tabulation of the lift and its derivatives on a grid, plus the
/// trapezoid partial integral of theta and the discrete column constant
/// c_disc = y_max - I_{y_max}[theta].  The dynamics always consume these
/// tabulated values so discrete identities close exactly.
struct ThetaBank {
  std::size_t n_modes = 0;
  std::size_t n_y = 0;
  std::vector<double> theta;
  std::vector<double> dtheta_dy;
  std::vector<double> d2theta_dy2;
  std::vector<double> d3theta_dy3;
  std::vector<double> dtheta_dt;
  std::vector<double> d2theta_dydt;
  std::vector<double> int_theta;
  std::vector<double> c_disc;

  double at(const std::vector<double>& table, std::size_t mode,
            std::size_t j) const {
    return table[mode * n_y + j];
  }
};
ThetaBank make_theta_bank(const Grid& grid, double t, double eps);

/// rho sampled on the grid's y-nodes.
std::vector<double> rho_profile(const Grid& grid, double t, double eps);

/// chi sampled on the grid's y-nodes.
std::vector<double> chi_profile(const Grid& grid);

}  // namespace tdk
