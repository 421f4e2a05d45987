#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "tdk/field.h"
#include "tdk/fourier.h"
#include "tdk/grid.h"
#include "tdk/ydiff.h"

using tdk::complex;
using tdk::Fourier;
using tdk::Grid;
using tdk::SpectralField;
using tdk::SurfaceSpectrum;

namespace {

constexpr double kPi = 3.14159265358979323846;

// Reference transform: the literal quadrature sum, no FFT, no phase tricks.
// Frozen as the oracle for the library's forward convention
//   f_hat(xi_k) = dx * sum_i f(x_i) e^{-i xi_k x_i}.
std::vector<complex> dft_oracle(const Grid& grid,
                                const std::vector<complex>& samples) {
  const std::size_t n = grid.n_modes();
  std::vector<complex> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    complex acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double phase = -grid.xi(k) * grid.x(i);
      acc += samples[i] * complex(std::cos(phase), std::sin(phase));
    }
    out[k] = acc * grid.dx();
  }
  return out;
}

// Reference convolution: the O(N^2) double sum over integer wavenumbers,
// restricted to the dealiased band on both inputs and the output.
SurfaceSpectrum convolve_oracle(const Grid& grid, const SurfaceSpectrum& f,
                                const SurfaceSpectrum& g) {
  const long kd = grid.dealias_limit();
  auto idx = [&](long k) {
    return static_cast<std::size_t>(k >= 0 ? k
                                           : k + static_cast<long>(grid.n_modes()));
  };
  SurfaceSpectrum out(grid.n_modes());
  for (long k = -kd; k <= kd; ++k) {
    complex acc = 0.0;
    for (long m = -kd; m <= kd; ++m) {
      const long rem = k - m;
      if (rem < -kd || rem > kd) continue;
      acc += f[idx(m)] * g[idx(rem)];
    }
    out[idx(k)] = acc / (2.0 * kPi * grid.half_length());
  }
  return out;
}

SurfaceSpectrum random_hermitian_surface(const Grid& grid, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  SurfaceSpectrum f(grid.n_modes());
  for (std::size_t i = 1; i < grid.n_modes() / 2; ++i) {
    f[i] = complex(gauss(rng), gauss(rng));
    f[grid.conj_index(i)] = std::conj(f[i]);
  }
  f[0] = complex(gauss(rng), 0.0);
  return f;
}

SpectralField random_hermitian_field(const Grid& grid, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  SpectralField f(grid);
  for (std::size_t i = 1; i < grid.n_modes() / 2; ++i) {
    for (std::size_t j = 0; j < grid.n_y(); ++j) {
      f(i, j) = complex(gauss(rng), gauss(rng));
      f(grid.conj_index(i), j) = std::conj(f(i, j));
    }
  }
  for (std::size_t j = 0; j < grid.n_y(); ++j)
    f(0, j) = complex(gauss(rng), 0.0);
  return f;
}

}  // namespace

TEST_CASE("grid rejects invalid shapes") {
  CHECK_THROWS_AS(Grid(7, 10.0, 64, 12.0), std::invalid_argument);
  CHECK_THROWS_AS(Grid(48, 10.0, 64, 12.0), std::invalid_argument);  // not 2^m
  CHECK_THROWS_AS(Grid(4, 10.0, 64, 12.0), std::invalid_argument);
  CHECK_THROWS_AS(Grid(16, 10.0, 8, 12.0), std::invalid_argument);
  CHECK_THROWS_AS(Grid(16, 0.0, 64, 12.0), std::invalid_argument);
  CHECK_THROWS_AS(Grid(16, 10.0, 64, 4.0), std::invalid_argument);
}

TEST_CASE("grid wavenumber layout and conjugate pairing") {
  Grid grid(16, 2.0, 32, 12.0);
  CHECK(grid.wavenumber(0) == 0);
  CHECK(grid.wavenumber(7) == 7);
  CHECK(grid.wavenumber(8) == -8);   // Nyquist slot
  CHECK(grid.wavenumber(15) == -1);
  CHECK(grid.xi(3) == doctest::Approx(1.5).epsilon(1e-15));
  CHECK(grid.conj_index(0) == 0);
  CHECK(grid.conj_index(3) == 13);
  CHECK(grid.dealias_limit() == 5);
  CHECK(grid.retained(5));
  CHECK(!grid.retained(6));
  CHECK(grid.retained(11));   // k = -5
  CHECK(!grid.retained(10));  // k = -6

  // Quadrature closure: dx * dxi * N = 2 pi makes round trips exact.
  CHECK(grid.dx() * grid.dxi() * 16.0 ==
        doctest::Approx(2.0 * kPi).epsilon(1e-15));
  CHECK(grid.x(0) == doctest::Approx(-kPi * 2.0));
  CHECK(grid.y(0) == 0.0);
  CHECK(grid.y(31) == doctest::Approx(12.0));
}

TEST_CASE("forward transform matches the direct DFT sum") {
  Grid grid(16, 3.0, 32, 12.0);
  Fourier fourier(grid);
  std::mt19937_64 rng(101);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<complex> samples(grid.n_modes());
  for (auto& v : samples) v = complex(gauss(rng), 0.0);

  SurfaceSpectrum got(grid.n_modes());
  fourier.forward(samples, got);
  const auto want = dft_oracle(grid, samples);
  double max_diff = 0.0;
  for (std::size_t k = 0; k < grid.n_modes(); ++k)
    max_diff = std::max(max_diff, std::abs(got[k] - want[k]));
  CHECK(max_diff < 1e-12);

  std::vector<complex> back;
  fourier.inverse(got, back);
  double round = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i)
    round = std::max(round, std::abs(back[i] - samples[i]));
  CHECK(round < 1e-13);
}

TEST_CASE("cosine of the fundamental lands on the conjugate mode pair") {
  Grid grid(32, 5.0, 32, 12.0);
  Fourier fourier(grid);
  std::vector<complex> samples(grid.n_modes());
  for (std::size_t i = 0; i < samples.size(); ++i)
    samples[i] = std::cos(grid.x(i) / grid.half_length());

  SurfaceSpectrum f(grid.n_modes());
  fourier.forward(samples, f);

  // All mass at k = +-1, equal conjugate values pi * L_x.
  const double expected = kPi * grid.half_length();
  CHECK(std::abs(f[1] - expected) < 1e-10);
  CHECK(std::abs(f[grid.conj_index(1)] - expected) < 1e-10);
  for (std::size_t k = 0; k < grid.n_modes(); ++k) {
    if (k == 1 || k == grid.conj_index(1)) continue;
    CHECK(std::abs(f[k]) < 1e-10);
  }
}

TEST_CASE("zero samples give a zero spectrum") {
  Grid grid(16, 1.0, 32, 12.0);
  Fourier fourier(grid);
  std::vector<complex> samples(grid.n_modes(), 0.0);
  SurfaceSpectrum f(grid.n_modes());
  fourier.forward(samples, f);
  CHECK(tdk::max_abs(f) == 0.0);
}

TEST_CASE("field transforms round trip to machine precision") {
  Grid grid(32, 2.0, 32, 10.0);
  Fourier fourier(grid);
  SpectralField f = random_hermitian_field(grid, 7);
  // The Nyquist column is not representable; keep the invariant.
  for (std::size_t j = 0; j < grid.n_y(); ++j)
    f(grid.n_modes() / 2, j) = 0.0;

  std::vector<complex> physical;
  fourier.inverse(f, physical);
  SpectralField back(grid);
  fourier.forward(physical, back);
  double max_diff = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i)
    max_diff = std::max(max_diff, std::abs(f.data()[i] - back.data()[i]));
  CHECK(max_diff < 1e-12);

  // Hermitian coefficients produce real samples.
  double max_imag = 0.0;
  for (const auto& v : physical) max_imag = std::max(max_imag, std::abs(v.imag()));
  CHECK(max_imag < 1e-12);
}

TEST_CASE("multiplier symbols act coefficient-wise on physical frequency") {
  Grid grid(16, 2.0, 32, 12.0);
  SurfaceSpectrum f(grid.n_modes());
  f[4] = 1.0;  // xi = 2
  f[grid.conj_index(4)] = 1.0;
  tdk::apply_multiplier(grid, [](double xi) { return complex(std::abs(xi), 0.0); }, f);
  CHECK(f[4] == complex(2.0, 0.0));
  CHECK(f[grid.conj_index(4)] == complex(2.0, 0.0));

  SUBCASE("zero-radius exponential symbol is the identity") {
    SurfaceSpectrum g = random_hermitian_surface(grid, 3);
    SurfaceSpectrum h = g;
    tdk::apply_multiplier(grid, [](double) { return complex(1.0, 0.0); }, h);
    for (std::size_t k = 0; k < grid.n_modes(); ++k) CHECK(g[k] == h[k]);
  }
}

TEST_CASE("transport-dispersion symbol is skew against every real function") {
  // <g, dx|dx| g> vanishes analytically; discretely it cancels to round-off
  // because the symbol i xi |xi| is odd under conjugate pairing.
  Grid grid(64, 1.0, 32, 12.0);
  Fourier fourier(grid);

  auto skew_defect = [&](const std::vector<complex>& samples) {
    SurfaceSpectrum g(grid.n_modes());
    fourier.forward(samples, g);
    SurfaceSpectrum dg = g;
    tdk::apply_multiplier(
        grid, [](double xi) { return complex(0.0, xi * std::abs(xi)); }, dg);
    std::vector<complex> dsamples;
    fourier.inverse(dg, dsamples);
    double inner = 0.0;
    double norm_sq = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
      inner += samples[i].real() * dsamples[i].real() * grid.dx();
      norm_sq += samples[i].real() * samples[i].real() * grid.dx();
    }
    return std::abs(inner) / std::max(norm_sq, 1e-300);
  };

  SUBCASE("single harmonic") {
    std::vector<complex> samples(grid.n_modes());
    for (std::size_t i = 0; i < samples.size(); ++i)
      samples[i] = std::sin(3.0 * grid.x(i));
    CHECK(skew_defect(samples) < 1e-13);
  }

  SUBCASE("random real data") {
    std::mt19937_64 rng(2024);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
      std::vector<complex> samples(grid.n_modes());
      for (auto& v : samples) v = complex(gauss(rng), 0.0);
      CHECK(skew_defect(samples) < 1e-13);
    }
  }
}

TEST_CASE("convolution of fundamental modes obeys the stated normalization") {
  Grid grid(32, 4.0, 32, 12.0);
  Fourier fourier(grid);
  std::vector<complex> samples(grid.n_modes());
  for (std::size_t i = 0; i < samples.size(); ++i)
    samples[i] = std::cos(grid.x(i) / grid.half_length());
  SurfaceSpectrum f(grid.n_modes());
  fourier.forward(samples, f);

  SurfaceSpectrum out(grid.n_modes());
  fourier.convolve(f, f, out);

  // cos^2 = 1/2 + cos(2x/L)/2: the doubled mode carries pi L_x / 2.
  CHECK(std::abs(out[2] - kPi * grid.half_length() / 2.0) < 1e-10);
  CHECK(std::abs(out[0] - kPi * grid.half_length()) < 1e-10);
  CHECK(std::abs(out[1]) < 1e-10);
}

TEST_CASE("convolving with a pure mean mode scales the partner") {
  Grid grid(32, 4.0, 32, 12.0);
  Fourier fourier(grid);
  const double c = 0.75;
  SurfaceSpectrum mean(grid.n_modes());
  mean[0] = c * 2.0 * kPi * grid.half_length();  // physical constant c
  SurfaceSpectrum g = random_hermitian_surface(grid, 11);
  tdk::dealias(grid, g);

  SurfaceSpectrum out(grid.n_modes());
  fourier.convolve(mean, g, out);
  for (std::size_t k = 0; k < grid.n_modes(); ++k)
    CHECK(std::abs(out[k] - c * g[k]) < 1e-10 * (1.0 + std::abs(g[k])));
}

TEST_CASE("convolution agrees with the direct double sum") {
  Grid grid(32, 4.0, 64, 12.0);
  Fourier fourier(grid);
  SurfaceSpectrum f = random_hermitian_surface(grid, 21);
  SurfaceSpectrum g = random_hermitian_surface(grid, 22);

  SurfaceSpectrum got(grid.n_modes());
  fourier.convolve(f, g, got);
  SurfaceSpectrum fd = f;
  SurfaceSpectrum gd = g;
  tdk::dealias(grid, fd);
  tdk::dealias(grid, gd);
  const SurfaceSpectrum want = convolve_oracle(grid, fd, gd);

  double max_diff = 0.0;
  for (std::size_t k = 0; k < grid.n_modes(); ++k)
    max_diff = std::max(max_diff, std::abs(got[k] - want[k]));
  CHECK(max_diff < 1e-12);
}

TEST_CASE("field convolution applies the same band rule per height") {
  Grid grid(16, 2.0, 16, 12.0);
  Fourier fourier(grid);
  SpectralField f = random_hermitian_field(grid, 31);
  SpectralField g = random_hermitian_field(grid, 32);
  SpectralField out(grid);
  fourier.convolve(f, g, out);

  for (std::size_t j = 0; j < grid.n_y(); ++j) {
    SurfaceSpectrum fs(grid.n_modes()), gs(grid.n_modes());
    for (std::size_t i = 0; i < grid.n_modes(); ++i) {
      fs[i] = f(i, j);
      gs[i] = g(i, j);
    }
    tdk::dealias(grid, fs);
    tdk::dealias(grid, gs);
    const SurfaceSpectrum want = convolve_oracle(grid, fs, gs);
    for (std::size_t i = 0; i < grid.n_modes(); ++i)
      CHECK(std::abs(out(i, j) - want[i]) < 1e-12);
  }
}

TEST_CASE("plancherel identity links physical mass to coefficient mass") {
  Grid grid(64, 1.0, 32, 12.0);
  Fourier fourier(grid);
  std::vector<complex> samples(grid.n_modes());
  for (std::size_t i = 0; i < samples.size(); ++i)
    samples[i] = std::sin(3.0 * grid.x(i));
  SurfaceSpectrum g(grid.n_modes());
  fourier.forward(samples, g);

  double physical = 0.0;
  for (const auto& v : samples) physical += v.real() * v.real() * grid.dx();
  double spectral = 0.0;
  for (std::size_t k = 0; k < grid.n_modes(); ++k)
    spectral += std::norm(g[k]) * grid.dxi() / (2.0 * kPi);
  CHECK(physical == doctest::Approx(spectral).epsilon(1e-12));
  CHECK(physical == doctest::Approx(kPi).epsilon(1e-12));
}

TEST_CASE("ddx is the i xi multiplier") {
  Grid grid(32, 2.0, 32, 12.0);
  Fourier fourier(grid);
  std::vector<complex> samples(grid.n_modes());
  for (std::size_t i = 0; i < samples.size(); ++i)
    samples[i] = std::sin(2.0 * grid.x(i));
  SurfaceSpectrum g(grid.n_modes());
  fourier.forward(samples, g);
  SurfaceSpectrum dg(grid.n_modes());
  tdk::ddx(grid, g, dg);
  std::vector<complex> dsamples;
  fourier.inverse(dg, dsamples);
  for (std::size_t i = 0; i < samples.size(); ++i)
    CHECK(dsamples[i].real() ==
          doctest::Approx(2.0 * std::cos(2.0 * grid.x(i))).epsilon(1e-10));
}

TEST_CASE("hermitian helpers measure and repair the pairing") {
  Grid grid(16, 1.0, 32, 12.0);
  SurfaceSpectrum f = random_hermitian_surface(grid, 5);
  CHECK(tdk::hermitian_defect(grid, f) < 1e-15);
  f[3] += complex(0.5, 0.25);
  CHECK(tdk::hermitian_defect(grid, f) > 0.1);
  tdk::enforce_hermitian(grid, f);
  CHECK(tdk::hermitian_defect(grid, f) < 1e-15);
  CHECK(f[grid.n_modes() / 2] == complex(0.0, 0.0));
  CHECK(f[0].imag() == 0.0);
}

TEST_CASE("non-finite detection sees a single poisoned entry") {
  Grid grid(16, 1.0, 32, 12.0);
  SpectralField f(grid);
  CHECK(!tdk::has_non_finite(f));
  f(3, 7) = complex(std::numeric_limits<double>::quiet_NaN(), 0.0);
  CHECK(tdk::has_non_finite(f));
}

TEST_CASE("ddy and d2dy2 are exact on low polynomials") {
  Grid grid(8, 1.0, 64, 12.0);
  SpectralField f(grid);
  for (std::size_t i = 0; i < grid.n_modes(); ++i)
    for (std::size_t j = 0; j < grid.n_y(); ++j)
      f(i, j) = grid.y(j);

  SpectralField df(grid);
  tdk::ddy(grid, f, df);
  for (std::size_t j = 0; j < grid.n_y(); ++j)
    CHECK(df(0, j).real() == doctest::Approx(1.0).epsilon(1e-13));

  for (std::size_t j = 0; j < grid.n_y(); ++j)
    f(0, j) = grid.y(j) * grid.y(j);
  SpectralField d2f(grid);
  tdk::d2dy2(grid, f, d2f);
  for (std::size_t j = 1; j + 1 < grid.n_y(); ++j)
    CHECK(d2f(0, j).real() == doctest::Approx(2.0).epsilon(1e-11));
}

TEST_CASE("ddy converges at second order on a Gaussian") {
  auto error_at = [](std::size_t n_y) {
    Grid grid(8, 1.0, n_y, 12.0);
    SpectralField f(grid);
    for (std::size_t j = 0; j < n_y; ++j)
      f(0, j) = std::exp(-grid.y(j) * grid.y(j));
    SpectralField df(grid);
    tdk::ddy(grid, f, df);
    double err = 0.0;
    for (std::size_t j = 0; j < n_y; ++j) {
      const double y = grid.y(j);
      const double exact = -2.0 * y * std::exp(-y * y);
      err = std::max(err, std::abs(df(0, j).real() - exact));
    }
    return err;
  };
  const double e1 = error_at(128);
  const double e2 = error_at(256);
  const double order = std::log2(e1 / e2);
  CHECK(order > 1.7);
  CHECK(order < 2.4);
}

TEST_CASE("cumulative trapezoid integrates constants exactly") {
  Grid grid(8, 1.0, 32, 12.0);
  SpectralField f(grid);
  f.fill(complex(1.0, 0.0));
  SpectralField intf(grid);
  tdk::integrate_y(grid, f, intf);
  for (std::size_t j = 0; j < grid.n_y(); ++j)
    CHECK(intf(0, j).real() == doctest::Approx(grid.y(j)).epsilon(1e-14));
}

TEST_CASE("full-column integral of the half Gaussian hits the closed form") {
  Grid grid(8, 1.0, 2048, 12.0);
  SpectralField f(grid);
  for (std::size_t j = 0; j < grid.n_y(); ++j)
    f(0, j) = std::exp(-grid.y(j) * grid.y(j) / 2.0);
  SurfaceSpectrum column(grid.n_modes());
  tdk::integrate_y_full(grid, f, column);
  CHECK(std::abs(column[0].real() - std::sqrt(kPi / 2.0)) < 1e-6);
}

TEST_CASE("integration after differentiation recovers the profile offset") {
  Grid grid(8, 1.0, 256, 12.0);
  SpectralField f(grid);
  for (std::size_t j = 0; j < grid.n_y(); ++j) {
    const double y = grid.y(j);
    f(0, j) = std::sin(y) + 2.0;
  }
  SpectralField df(grid), back(grid);
  tdk::ddy(grid, f, df);
  tdk::integrate_y(grid, df, back);
  double err = 0.0;
  for (std::size_t j = 0; j < grid.n_y(); ++j)
    err = std::max(err,
                   std::abs(back(0, j).real() - (f(0, j).real() - f(0, 0).real())));
  CHECK(err < 1e-3);  // O(dy^2) at n_y = 256

  const double e_coarse = err;
  Grid fine(8, 1.0, 512, 12.0);
  SpectralField ff(fine), dff(fine), backf(fine);
  for (std::size_t j = 0; j < fine.n_y(); ++j)
    ff(0, j) = std::sin(fine.y(j)) + 2.0;
  tdk::ddy(fine, ff, dff);
  tdk::integrate_y(fine, dff, backf);
  double err_fine = 0.0;
  for (std::size_t j = 0; j < fine.n_y(); ++j)
    err_fine = std::max(err_fine, std::abs(backf(0, j).real() -
                                           (ff(0, j).real() - ff(0, 0).real())));
  CHECK(e_coarse / err_fine > 3.0);
}

TEST_CASE("numerov operator matches d2dy2 at fourth order on Dirichlet data") {
  auto error_at = [](std::size_t n_y) {
    Grid grid(8, 1.0, n_y, 12.0);
    SpectralField f(grid);
    for (std::size_t j = 0; j < n_y; ++j) {
      const double y = grid.y(j);
      // Vanishes at both walls: sin scaled to the interval.
      f(0, j) = std::sin(kPi * y / grid.y_max());
    }
    SpectralField d2f(grid);
    tdk::numerov_d2dy2(grid, f, d2f);
    double err = 0.0;
    const double factor = kPi / grid.y_max();
    for (std::size_t j = 1; j + 1 < n_y; ++j) {
      const double exact = -factor * factor * std::sin(factor * grid.y(j));
      err = std::max(err, std::abs(d2f(0, j).real() - exact));
    }
    return err;
  };
  const double e1 = error_at(64);
  const double e2 = error_at(128);
  CHECK(std::log2(e1 / e2) > 3.5);
}
