#include "tdk/presets.h"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "tdk/weights.h"
#include "tdk/ydiff.h"

namespace tdk {

namespace {

// Shapes of the manufactured pair: a few fixed modes with oscillating
// amplitudes on a polynomial bump that vanishes at both walls.
struct ModeSpec {
  std::size_t k;
  complex base;
  double omega;
};

std::vector<ModeSpec> shear_specs(double amp) {
  return {{1, amp * 0.8 * std::polar(1.0, 0.4), 1.7},
          {2, amp * 0.5 * std::polar(1.0, 1.1), -0.9}};
}

std::vector<ModeSpec> displacement_specs(double amp) {
  return {{1, amp * 0.6 * std::polar(1.0, 0.2), 1.1},
          {2, amp * 0.4 * std::polar(1.0, -0.5), 2.3},
          {3, amp * 0.25 * std::polar(1.0, 0.9), -1.4}};
}

std::vector<double> bump_profile(const Grid& grid) {
  std::vector<double> phi(grid.n_y());
  for (std::size_t j = 0; j < grid.n_y(); ++j) {
    const double u = grid.y(j) / grid.y_max();
    phi[j] = 16.0 * u * u * (1.0 - u) * (1.0 - u);
  }
  return phi;
}

void set_mode_profile(SpectralField& f, const Grid& grid, std::size_t k,
                      complex coeff, const std::vector<double>& profile) {
  complex* p = f.profile(k);
  for (std::size_t j = 0; j < grid.n_y(); ++j) p[j] = coeff * profile[j];
  if (k != 0) {
    complex* q = f.profile(grid.conj_index(k));
    for (std::size_t j = 0; j < grid.n_y(); ++j)
      q[j] = std::conj(coeff) * profile[j];
  }
}

void zero_walls(const Grid& grid, SpectralField& f) {
  for (std::size_t i = 0; i < grid.n_modes(); ++i) {
    f(i, 0) = complex(0.0, 0.0);
    f(i, grid.n_y() - 1) = complex(0.0, 0.0);
  }
}

DeckState certified_shape(const Grid& grid, const RunConfig& config) {
  DeckState st(grid);
  for (std::size_t k = 1; k <= 4; ++k) {
    const double fall = std::exp(-0.25 * static_cast<double>((k - 1) * (k - 1)));
    const complex a =
        config.amplitude * fall * std::polar(1.0, 0.7 * static_cast<double>(k));
    st.A[k] = a;
    st.A[grid.conj_index(k)] = std::conj(a);
  }
  std::vector<double> shape(grid.n_y());
  for (std::size_t j = 0; j < grid.n_y(); ++j) {
    const double y = grid.y(j);
    shape[j] = y * std::exp(-0.5 * y * y);
  }
  for (std::size_t k = 0; k <= 3; ++k) {
    const complex c =
        k == 0 ? complex(0.5 * config.amplitude, 0.0)
               : config.amplitude *
                     std::exp(-0.125 * static_cast<double>(k * k)) *
                     std::polar(1.0, 0.3 * static_cast<double>(k));
    set_mode_profile(st.wbar, grid, k, c, shape);
  }
  zero_walls(grid, st.wbar);

  // Scale the pair so the composite X measured at radius 10 tau0 hits the
  // configured small-data level; X is 1-homogeneous in (wbar, A).
  NormParams np;
  np.tau = 10.0 * config.tau0;
  np.r = config.r;
  np.delta = config.delta_override > 0.0 ? config.delta_override
                                         : select_delta(config.constants);
  CompositeNorms cn = composite_norms(grid, st, np);
  if (!(cn.X > 0.0))
    throw std::runtime_error("preset: degenerate certified shape");
  const complex scale(config.e0_target / cn.X, 0.0);
  st.wbar *= scale;
  st.A *= scale;
  return st;
}

}  // namespace

DeckState manufactured_state(const Grid& grid, double t, double eps,
                             double amplitude) {
  DeckState st(grid);
  st.t = t;
  st.eps = eps;
  const std::vector<double> phi = bump_profile(grid);
  set_mode_profile(st.wbar, grid, 0,
                   complex(0.3 * amplitude * std::cos(1.3 * t), 0.0), phi);
  for (const ModeSpec& m : shear_specs(amplitude))
    set_mode_profile(st.wbar, grid, m.k,
                     m.base * std::polar(1.0, m.omega * t), phi);
  for (const ModeSpec& m : displacement_specs(amplitude)) {
    const complex a = m.base * std::polar(1.0, m.omega * t);
    st.A[m.k] = a;
    st.A[grid.conj_index(m.k)] = std::conj(a);
  }
  return st;
}

void manufactured_tendency(const Grid& grid, double t, double amplitude,
                           SpectralField& dt_wbar, SurfaceSpectrum& dt_A) {
  dt_wbar = SpectralField(grid);
  dt_A = SurfaceSpectrum(grid);
  const std::vector<double> phi = bump_profile(grid);
  set_mode_profile(dt_wbar, grid, 0,
                   complex(-0.39 * amplitude * std::sin(1.3 * t), 0.0), phi);
  for (const ModeSpec& m : shear_specs(amplitude))
    set_mode_profile(dt_wbar, grid, m.k,
                     complex(0.0, m.omega) * m.base *
                         std::polar(1.0, m.omega * t),
                     phi);
  for (const ModeSpec& m : displacement_specs(amplitude)) {
    const complex da =
        complex(0.0, m.omega) * m.base * std::polar(1.0, m.omega * t);
    dt_A[m.k] = da;
    dt_A[grid.conj_index(m.k)] = std::conj(da);
  }
}

PresetBundle make_preset(const RunConfig& config) {
  const Grid grid(config.n_modes, config.half_length, config.n_y,
                  config.y_max);
  PresetBundle b;
  b.fourier = std::make_shared<Fourier>(grid);
  b.tau0 = config.tau0;
  const double eps0 =
      config.eps_override > 0.0 ? config.eps_override : 1.0 / 64.0;
  b.eps_handle = std::make_shared<double>(eps0);

  if (config.preset == "small-data-certified") {
    b.state = certified_shape(grid, config);
  } else if (config.preset == "bo-soliton") {
    b.state = DeckState(grid);
    b.state.A = bo_soliton(*b.fourier, config.soliton_speed, config.soliton_x0,
                           config.soliton_tail_tol, &b.soliton);
    b.has_soliton = true;
    b.evolve_wbar = false;
    b.nonlinear_terms = false;
    b.forced_bo = false;
  } else if (config.preset == "heat-column") {
    b.state = DeckState(grid);
    complex* p = b.state.wbar.profile(0);
    for (std::size_t j = 0; j < grid.n_y(); ++j) {
      const double y = grid.y(j);
      p[j] = complex(config.amplitude * std::exp(-(y - 4.0) * (y - 4.0)), 0.0);
    }
    zero_walls(grid, b.state.wbar);
    b.nonlinear_terms = false;
    b.forced_bo = false;
  } else if (config.preset == "manufactured-convergence") {
    const double amp = config.amplitude;
    b.state = manufactured_state(grid, 0.0, eps0, amp);
    auto fourier = b.fourier;
    auto eps_handle = b.eps_handle;
    b.source_w = [fourier, grid, eps_handle, amp](double t) {
      const double eps = *eps_handle;
      const DeckState target = manufactured_state(grid, t, eps, amp);
      SpectralField dtw;
      SurfaceSpectrum dta;
      manufactured_tendency(grid, t, amp, dtw, dta);
      SpectralField lap(grid);
      numerov_d2dy2(grid, target.wbar, lap);
      SpectralField s = dtw;
      for (std::size_t i = 0; i < grid.n_modes(); ++i) {
        const double xi = grid.xi(i);
        complex* sp = s.profile(i);
        const complex* wp = target.wbar.profile(i);
        const complex* lp = lap.profile(i);
        for (std::size_t j = 0; j < grid.n_y(); ++j)
          sp[j] += complex(0.0, xi * grid.y(j)) * wp[j] - lp[j];
      }
      const ThetaBank bank = make_theta_bank(grid, t, eps);
      s += term_N(*fourier, target.wbar);
      s += term_L(grid, target.wbar, target.A, bank);
      s += term_M(grid, target.wbar, target.A, bank);
      s += term_B(*fourier, target.wbar, target.A, bank, t, eps);
      zero_walls(grid, s);
      return s;
    };
    b.source_A = [fourier, grid, eps_handle, amp](double t) {
      const double eps = *eps_handle;
      const DeckState target = manufactured_state(grid, t, eps, amp);
      SpectralField dtw;
      SurfaceSpectrum dta;
      manufactured_tendency(grid, t, amp, dtw, dta);
      SurfaceSpectrum s = dta;
      for (std::size_t i = 0; i < grid.n_modes(); ++i) {
        const double xi = grid.xi(i);
        s[i] += complex(0.0, xi * std::abs(xi)) * target.A[i];
      }
      s -= bo_rhs_no_dispersion(*fourier, target.A, target.wbar, t, eps);
      return s;
    };
  } else {
    throw ConfigError("unknown preset: " + config.preset);
  }

  b.state.t = 0.0;
  b.state.eps = eps0;
  return b;
}

}  // namespace tdk
