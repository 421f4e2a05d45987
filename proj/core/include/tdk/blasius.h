#pragma once

#include <cstddef>
#include <vector>

namespace tdk {

/// Self-similar flat-plate profile: f''' + f f'' = 0 with f(0) = f'(0) = 0
/// and f' -> 1, sampled on a uniform similarity grid.
struct BlasiusProfile {
  double f_pp0 = 0.0;  // shooting parameter f''(0)
  double h = 0.0;      // similarity grid spacing
  std::vector<double> eta;
  std::vector<double> f;
  std::vector<double> fp;
  std::vector<double> fpp;

  double eta_max() const { return eta.empty() ? 0.0 : eta.back(); }

  /// Base speed in the wall-normalized variable z = f''(0) eta, so that
  /// u_b'(0) = 1 exactly; values past the grid saturate at the free stream.
  double u_b(double z) const;
  double u_b_prime(double z) const;
};

/// Shooting solve: bisection on f''(0) over [0.4, 0.5] with a fourth-order
/// integrator, until the far-field speed matches 1 within tol.  Throws when
/// the bracket does not straddle the matching condition.
BlasiusProfile blasius_solve(double eta_max = 12.0, double tol = 1e-10,
                             double h = 1e-3);

}  // namespace tdk
