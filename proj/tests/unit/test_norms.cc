#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "tdk/deck_terms.h"
#include "tdk/field.h"
#include "tdk/grid.h"
#include "tdk/ledger.h"
#include "tdk/norms.h"
#include "tdk/weights.h"
#include "tdk/ydiff.h"

using tdk::complex;
using tdk::DeckState;
using tdk::Grid;
using tdk::NormParams;
using tdk::SpectralField;
using tdk::SurfaceSpectrum;

namespace {

constexpr double kPi = 3.14159265358979323846;

// Scalar reference for one mode's weighted profile mass, written with its
// own trapezoid arithmetic.
double weighted_profile_mass(const Grid& grid,
                             const std::vector<complex>& profile, double t,
                             double eps) {
  double acc = 0.0;
  for (std::size_t j = 0; j + 1 < grid.n_y(); ++j) {
    const double ra = tdk::rho(grid.y(j), t, eps);
    const double rb = tdk::rho(grid.y(j + 1), t, eps);
    acc += 0.5 * grid.dy() *
           (ra * ra * std::norm(profile[j]) + rb * rb * std::norm(profile[j + 1]));
  }
  return acc;
}

}  // namespace

TEST_CASE("profile norm: zero field, homogeneity, and the scalar oracle") {
  Grid grid(16, 1.0, 64, 12.0);
  const double t = 0.002;
  const double eps = 1.0 / 64.0;

  SpectralField f(grid);
  CHECK(tdk::norm_tau_r(grid, f, 0.1, 2.5, t, eps) == 0.0);

  // Single mode xi = 1 with a Gaussian profile.
  for (std::size_t j = 0; j < grid.n_y(); ++j)
    f(1, j) = std::exp(-grid.y(j) * grid.y(j));
  const double tau = 0.3, r = 2.5;
  const double got = tdk::norm_tau_r(grid, f, tau, r, t, eps);

  std::vector<complex> profile(grid.n_y());
  for (std::size_t j = 0; j < grid.n_y(); ++j)
    profile[j] = std::exp(-grid.y(j) * grid.y(j));
  const double mass = weighted_profile_mass(grid, profile, t, eps);
  // dxi = 1 on this torus, <1>^2 = 2.
  const double want = std::exp(tau) * std::pow(2.0, r / 2.0) * std::sqrt(mass);
  CHECK(got == doctest::Approx(want).epsilon(1e-8));

  SUBCASE("absolute homogeneity") {
    SpectralField g = f;
    g *= complex(-3.5, 0.0);
    CHECK(tdk::norm_tau_r(grid, g, tau, r, t, eps) ==
          doctest::Approx(3.5 * got).epsilon(1e-13));
  }

  SUBCASE("monotone in radius and exponent") {
    CHECK(tdk::norm_tau_r(grid, f, 0.5, r, t, eps) > got);
    CHECK(tdk::norm_tau_r(grid, f, tau, 3.0, t, eps) > got);
  }
}

TEST_CASE("profile norm survives radii whose squared weight overflows") {
  Grid grid(16, 1.0, 32, 12.0);
  SpectralField f(grid);
  for (std::size_t j = 0; j < grid.n_y(); ++j)
    f(1, j) = std::exp(-grid.y(j));
  // e^{2 tau |xi|} = e^{720} exceeds double range, the norm e^{360}(...) does
  // not; only a log-domain accumulation returns the finite value.
  const double tau = 360.0, r = 2.5;
  const double value = tdk::norm_tau_r(grid, f, tau, r, 0.0, 1.0 / 64.0);
  CHECK(std::isfinite(value));
  std::vector<complex> profile(grid.n_y());
  for (std::size_t j = 0; j < grid.n_y(); ++j) profile[j] = f(1, j);
  const double want = std::exp(tau) * std::pow(2.0, r / 2.0) *
                      std::sqrt(weighted_profile_mass(grid, profile, 0.0,
                                                      1.0 / 64.0));
  CHECK(value == doctest::Approx(want).epsilon(1e-12));
}

TEST_CASE("under-resolution flag trips when the top band dominates") {
  Grid grid(64, 1.0, 32, 12.0);
  SpectralField f(grid);
  bool flag = true;
  // Mass concentrated at low modes: resolved.
  for (std::size_t j = 0; j < grid.n_y(); ++j) f(1, j) = std::exp(-grid.y(j));
  tdk::norm_tau_r(grid, f, 0.1, 2.5, 0.0, 1.0 / 64.0, &flag);
  CHECK(!flag);
  // Same mass parked on a top-third mode: flagged.
  SpectralField g(grid);
  for (std::size_t j = 0; j < grid.n_y(); ++j) g(30, j) = std::exp(-grid.y(j));
  tdk::norm_tau_r(grid, g, 0.1, 2.5, 0.0, 1.0 / 64.0, &flag);
  CHECK(flag);
}

TEST_CASE("surface norm closed form and physical-space cross-check") {
  Grid grid(16, 1.0, 32, 12.0);
  SurfaceSpectrum g(grid.n_modes());
  const double a = 0.8;
  g[2] = a;
  const double tau = 0.25, r = 2.5;
  const double got = tdk::norm_tilde(grid, g, tau, r);
  const double want = a * std::exp(2.0 * tau) * std::pow(5.0, r / 2.0);
  CHECK(got == doctest::Approx(want).epsilon(1e-13));

  SUBCASE("plancherel ties the flat norm to physical mass") {
    // At tau = r = 0 the square is dxi sum |g_k|^2 = 2 pi int g^2 dx.
    std::mt19937_64 rng(33);
    std::normal_distribution<double> gauss(0.0, 1.0);
    SurfaceSpectrum h(grid.n_modes());
    for (std::size_t i = 1; i < grid.n_modes() / 2; ++i) {
      h[i] = complex(gauss(rng), gauss(rng));
      h[grid.conj_index(i)] = std::conj(h[i]);
    }
    const double flat = tdk::norm_tilde(grid, h, 0.0, 0.0);
    double spectral_mass = 0.0;
    for (std::size_t i = 0; i < grid.n_modes(); ++i)
      spectral_mass += std::norm(h[i]) * grid.dxi();
    CHECK(flat * flat == doctest::Approx(spectral_mass).epsilon(1e-10));
  }
}

TEST_CASE("composite norms: zero state, displacement-only state, constituents") {
  Grid grid(16, 1.0, 64, 12.0);
  NormParams params;
  params.tau = 0.2;
  params.r = 2.5;
  params.delta = 4.0;
  params.eps = 1.0 / 64.0;

  SUBCASE("zero state") {
    DeckState state(grid);
    const auto n = tdk::composite_norms(grid, state, params);
    CHECK(n.X == 0.0);
    CHECK(n.Y == 0.0);
    CHECK(n.Z == 0.0);
    CHECK(n.H == 0.0);
  }

  SUBCASE("displacement-only state collapses to the surface slot") {
    DeckState state(grid);
    state.A[3] = complex(0.7, -0.2);
    state.A[grid.conj_index(3)] = std::conj(state.A[3]);
    const auto n = tdk::composite_norms(grid, state, params);
    CHECK(n.X ==
          doctest::Approx(tdk::norm_tilde(grid, state.A, params.tau, params.r))
              .epsilon(1e-13));
    CHECK(n.Z == 0.0);
    CHECK(n.H == 0.0);
    // The half-derivative slot scales the surface norm by |xi|^{1/2}.
    SurfaceSpectrum half = state.A;
    tdk::apply_half_x_derivative(grid, half);
    CHECK(n.Y ==
          doctest::Approx(tdk::norm_tilde(grid, half, params.tau, params.r))
              .epsilon(1e-13));
  }

  SUBCASE("single-mode shear state: all eight constituents from scalars") {
    DeckState state(grid);
    state.t = 0.004;
    state.eps = params.eps;
    const std::size_t k = 2;
    for (std::size_t j = 0; j < grid.n_y(); ++j) {
      const double y = grid.y(j);
      state.wbar(k, j) = y * std::exp(-y * y / 2.0);
    }
    const auto n = tdk::composite_norms(grid, state, params);

    // Recompute every slot from profile quadrature.  Derivatives use the
    // library stencils (the norms are defined on the discrete profiles),
    // the quadrature and weights are recomputed here.
    auto slot = [&](const std::vector<complex>& profile, double r_eff) {
      const double mass =
          weighted_profile_mass(grid, profile, state.t, state.eps);
      const double xi = grid.xi(k);
      return std::exp(params.tau * std::abs(xi)) *
             std::pow(1.0 + xi * xi, r_eff / 2.0) * std::sqrt(mass);
    };
    std::vector<complex> w(grid.n_y()), dw(grid.n_y()), ddw(grid.n_y());
    for (std::size_t j = 0; j < grid.n_y(); ++j) w[j] = state.wbar(k, j);
    SpectralField dwf(grid), ddwf(grid);
    tdk::ddy(grid, state.wbar, dwf);
    tdk::d2dy2(grid, state.wbar, ddwf);
    for (std::size_t j = 0; j < grid.n_y(); ++j) {
      dw[j] = dwf(k, j);
      ddw[j] = ddwf(k, j);
    }

    auto with_profile = [&](const std::vector<complex>& base,
                            auto&& weight_fn) {
      std::vector<complex> out(grid.n_y());
      for (std::size_t j = 0; j < grid.n_y(); ++j)
        out[j] = base[j] * weight_fn(grid.y(j));
      return out;
    };
    const auto chi_dw = with_profile(dw, [](double y) { return tdk::chi(y); });
    const auto y_w = with_profile(w, [](double y) { return y; });
    const auto y_chi_dw =
        with_profile(dw, [](double y) { return y * tdk::chi(y); });

    const double x_want = slot(w, params.r) +
                          slot(chi_dw, params.r - 0.5) / params.delta;
    CHECK(n.X == doctest::Approx(x_want).epsilon(1e-8));

    const double z_want = slot(dw, params.r) +
                          slot(with_profile(ddw, [](double y) {
                                 return tdk::chi(y);
                               }),
                               params.r - 0.5) /
                              params.delta;
    CHECK(n.Z == doctest::Approx(z_want).epsilon(1e-8));

    const double h_want = slot(y_w, params.r) +
                          slot(y_chi_dw, params.r - 0.5) / params.delta;
    CHECK(n.H == doctest::Approx(h_want).epsilon(1e-8));

    const double sqrt_xi = std::sqrt(std::abs(grid.xi(k)));
    const double y_want = sqrt_xi * (slot(w, params.r) +
                                     slot(chi_dw, params.r - 0.5) / params.delta);
    CHECK(n.Y == doctest::Approx(y_want).epsilon(1e-8));
  }
}

TEST_CASE("total energy over synthetic ledgers") {
  const double eps = 1.0 / 64.0;
  tdk::EnergyLedger ledger;

  SUBCASE("single sample is the squared sup slot") {
    tdk::LedgerRow row;
    row.t = 0.0;
    row.X = 1.5;
    row.Y = 9.0;
    ledger.append(row);
    CHECK(tdk::total_energy(ledger, eps, 1) == doctest::Approx(2.25));
  }

  SUBCASE("constant rows integrate in closed form") {
    const double T = 0.8;
    for (int i = 0; i <= 8; ++i) {
      tdk::LedgerRow row;
      row.t = T * i / 8.0;
      row.X = 2.0;
      row.Y = 3.0;
      row.Z = 4.0;
      row.H = 5.0;
      ledger.append(row);
    }
    const double want =
        4.0 + T * (9.0 + 16.0 / 16.0 + 25.0 / (64.0 * eps));
    CHECK(tdk::total_energy(ledger, eps, ledger.size()) ==
          doctest::Approx(want).epsilon(1e-13));
  }

  SUBCASE("sampling refinement converges at second order") {
    // Smooth synthetic histories; the trapezoid defect shrinks by four per
    // halving of the sample interval.
    auto energy_at = [&](std::size_t n_samples) {
      tdk::EnergyLedger fine;
      for (std::size_t i = 0; i <= n_samples; ++i) {
        const double t = static_cast<double>(i) / n_samples;
        tdk::LedgerRow row;
        row.t = t;
        row.X = 1.0;
        row.Y = std::sin(kPi * t);
        row.Z = std::cos(2.0 * t);
        row.H = t * t;
        fine.append(row);
      }
      return tdk::total_energy(fine, eps, fine.size());
    };
    // Closed-form limits: int sin^2(pi t) = 1/2, int cos^2(2t), int t^4.
    const double exact = 1.0 + 0.5 +
                         (0.5 + std::sin(4.0) / 8.0) / 16.0 +
                         (1.0 / 5.0) / (64.0 * eps);
    const double e1 = std::abs(energy_at(64) - exact);
    const double e2 = std::abs(energy_at(128) - exact);
    CHECK(e1 / e2 > 3.5);
    CHECK(e1 / e2 < 4.5);
  }

  SUBCASE("empty slice is rejected") {
    CHECK_THROWS_AS(tdk::total_energy(ledger, eps, 0), std::invalid_argument);
  }
}

TEST_CASE("radius decay rates from the composite norms") {
  tdk::CompositeNorms norms;
  const double eps = 1.0 / 64.0;

  SUBCASE("zero norms floor at the relaxation rate") {
    const auto g = tdk::gammas(norms, eps, 5.0, 1.0, 1.0);
    CHECK(g.gamma1 == doctest::Approx(64.0));
    CHECK(g.gamma2 == doctest::Approx(64.0));
    const auto g2 = tdk::gammas(norms, eps, 5.0, 2.0, 1.0);
    CHECK(g2.gamma1 == doctest::Approx(128.0));
    CHECK(g2.gamma2 == doctest::Approx(64.0));
  }

  SUBCASE("synthetic norms reproduce the arithmetic") {
    norms.X = 1.0;
    norms.Z = 2.0;
    norms.H = 3.0;
    const auto g = tdk::gammas(norms, eps, 5.0, 1.0, 1.0);
    CHECK(g.gamma2 == doctest::Approx(64.0 + 0.5 + 1.0 + 15.0));
    CHECK(g.gamma1 == doctest::Approx(9.0 + 80.5));
  }
}

TEST_CASE("radius update quadrature closes the integral identity") {
  SUBCASE("zero decay rate leaves the unit drift") {
    CHECK(tdk::advance_tau(1.0, 0.0, 0.25) == doctest::Approx(0.75));
  }

  SUBCASE("discrete identity tau + t + sum Gamma1 dt = tau0 to round-off") {
    std::mt19937_64 rng(71);
    std::uniform_real_distribution<double> uni(0.0, 50.0);
    const double dt = 1e-3;
    const double tau0 = 2.0;
    double tau = tau0;
    double gamma_sum = 0.0;
    for (int k = 0; k < 500; ++k) {
      const double gamma1 = uni(rng);
      tau = tdk::advance_tau(tau, gamma1, dt);
      gamma_sum += gamma1 * dt;
    }
    const double t = 500 * dt;
    CHECK(tau + t + gamma_sum == doctest::Approx(tau0).epsilon(1e-12));
  }

  SUBCASE("crossing zero signals exhaustion") {
    CHECK(tdk::advance_tau(0.01, 100.0, 1e-3) <= 0.0);
  }
}

TEST_CASE("smallness selection: delta closed form and the chained choices") {
  tdk::EstimateConstants constants;  // all ones

  SUBCASE("delta solves its inequality with equality") {
    const double delta = tdk::select_delta(constants);
    CHECK(delta == doctest::Approx(std::sqrt(1600.0 / 84.0)).epsilon(1e-13));
    CHECK(delta == doctest::Approx(4.36436).epsilon(1e-5));
    CHECK(1.0 / 100.0 + 1.0 / (delta * delta) <= 1.0 / 16.0 + 1e-15);
  }

  SUBCASE("relaxation parameter caps at 1/64") {
    const auto p = tdk::select_parameters(1.0, 1.0, constants);
    CHECK(p.eps == doctest::Approx(1.0 / 64.0));
    const auto q = tdk::select_parameters(10.0, 0.5, constants);
    CHECK(q.eps == doctest::Approx(0.5 / 120.0).epsilon(1e-13));
  }

  SUBCASE("selected window passes its own inequalities maximally") {
    const double e0 = 1e-2, tau0 = 0.1;
    const auto p = tdk::select_parameters(e0, tau0, constants);
    REQUIRE(p.feasible);
    CHECK(p.t_star > 0.0);
    CHECK(p.t_star <= p.eps);

    // Independent re-evaluation of the four window inequalities.
    auto admissible = [&](double T) {
      const double quarter = std::pow(T, 0.25);
      const double half = std::sqrt(T);
      return quarter * (1.0 + p.delta) * (half / p.eps + 1.0) <= 1.0 &&
             half * (1.0 + p.delta) * (half + 1.0) * std::sqrt(1.5 * e0) <=
                 tau0 / 8.0 &&
             T <= tau0 / 4.0 &&
             quarter * (1.0 + std::pow(e0, 0.25)) <= 1.0 / 16.0;
    };
    CHECK(admissible(p.t_star));
    if (p.t_star < p.eps) CHECK(!admissible(p.t_star * (1.0 + 1e-9)));
  }

  SUBCASE("oversized data is flagged infeasible") {
    const auto p = tdk::select_parameters(1e9, 1e-6, constants);
    CHECK(!p.feasible);
  }

  SUBCASE("invalid inputs are rejected") {
    CHECK_THROWS_AS(tdk::select_parameters(0.0, 1.0, constants),
                    std::invalid_argument);
    CHECK_THROWS_AS(tdk::select_parameters(1.0, -1.0, constants),
                    std::invalid_argument);
  }
}
