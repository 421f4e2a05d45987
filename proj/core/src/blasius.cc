#include "tdk/blasius.h"

#include <cmath>
#include <stdexcept>

namespace tdk {

namespace {

struct Shoot {
  double f, fp, fpp;
};

Shoot deriv(const Shoot& s) { return {s.fp, s.fpp, -s.f * s.fpp}; }

Shoot advance(const Shoot& s, double h) {
  const Shoot k1 = deriv(s);
  const Shoot s2{s.f + 0.5 * h * k1.f, s.fp + 0.5 * h * k1.fp,
                 s.fpp + 0.5 * h * k1.fpp};
  const Shoot k2 = deriv(s2);
  const Shoot s3{s.f + 0.5 * h * k2.f, s.fp + 0.5 * h * k2.fp,
                 s.fpp + 0.5 * h * k2.fpp};
  const Shoot k3 = deriv(s3);
  const Shoot s4{s.f + h * k3.f, s.fp + h * k3.fp, s.fpp + h * k3.fpp};
  const Shoot k4 = deriv(s4);
  return {s.f + h / 6.0 * (k1.f + 2.0 * k2.f + 2.0 * k3.f + k4.f),
          s.fp + h / 6.0 * (k1.fp + 2.0 * k2.fp + 2.0 * k3.fp + k4.fp),
          s.fpp + h / 6.0 * (k1.fpp + 2.0 * k2.fpp + 2.0 * k3.fpp + k4.fpp)};
}

double terminal_speed(double fpp0, long long n_steps, double h) {
  Shoot s{0.0, 0.0, fpp0};
  for (long long k = 0; k < n_steps; ++k) s = advance(s, h);
  return s.fp;
}

// Cubic Hermite between uniform nodes; q in grid units of h.
double hermite(double v0, double d0, double v1, double d1, double h,
               double u) {
  const double u2 = u * u, u3 = u2 * u;
  return (2.0 * u3 - 3.0 * u2 + 1.0) * v0 + (u3 - 2.0 * u2 + u) * h * d0 +
         (-2.0 * u3 + 3.0 * u2) * v1 + (u3 - u2) * h * d1;
}

}  // namespace

double BlasiusProfile::u_b(double z) const {
  const double q = z / f_pp0;
  if (q <= 0.0) return 0.0;
  if (q >= eta_max()) return fp.back();
  const std::size_t k =
      std::min(static_cast<std::size_t>(q / h), fp.size() - 2);
  const double u = q / h - static_cast<double>(k);
  return hermite(fp[k], fpp[k], fp[k + 1], fpp[k + 1], h, u);
}

double BlasiusProfile::u_b_prime(double z) const {
  const double q = z / f_pp0;
  if (q <= 0.0) return fpp.front() / f_pp0;  // = 1 by normalization
  if (q >= eta_max()) return 0.0;
  const std::size_t k =
      std::min(static_cast<std::size_t>(q / h), fpp.size() - 2);
  const double u = q / h - static_cast<double>(k);
  const double d0 = -f[k] * fpp[k];
  const double d1 = -f[k + 1] * fpp[k + 1];
  return hermite(fpp[k], d0, fpp[k + 1], d1, h, u) / f_pp0;
}

BlasiusProfile blasius_solve(double eta_max, double tol, double h) {
  if (eta_max < 10.0)
    throw std::invalid_argument("blasius: eta_max must be at least 10");
  if (h <= 0.0 || tol <= 0.0)
    throw std::invalid_argument("blasius: step and tolerance must be positive");
  const long long n_steps = std::llround(eta_max / h);

  double lo = 0.4, hi = 0.5;
  const double g_lo = terminal_speed(lo, n_steps, h) - 1.0;
  const double g_hi = terminal_speed(hi, n_steps, h) - 1.0;
  if (g_lo >= 0.0 || g_hi <= 0.0)
    throw std::invalid_argument(
        "blasius: shooting bracket does not straddle the free stream");
  while (hi - lo > 1e-14) {
    const double mid = 0.5 * (lo + hi);
    if (terminal_speed(mid, n_steps, h) - 1.0 <= 0.0)
      lo = mid;
    else
      hi = mid;
  }

  BlasiusProfile out;
  out.f_pp0 = 0.5 * (lo + hi);
  out.h = h;
  out.eta.resize(static_cast<std::size_t>(n_steps) + 1);
  out.f.resize(out.eta.size());
  out.fp.resize(out.eta.size());
  out.fpp.resize(out.eta.size());
  Shoot s{0.0, 0.0, out.f_pp0};
  for (std::size_t k = 0; k < out.eta.size(); ++k) {
    out.eta[k] = static_cast<double>(k) * h;
    out.f[k] = s.f;
    out.fp[k] = s.fp;
    out.fpp[k] = s.fpp;
    if (k + 1 < out.eta.size()) s = advance(s, h);
  }
  if (std::abs(out.fp.back() - 1.0) > tol)
    throw std::runtime_error("blasius: far-field speed did not converge");
  return out;
}

}  // namespace tdk
