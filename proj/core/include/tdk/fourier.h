#pragma once

#include <functional>
#include <vector>

#include "tdk/field.h"
#include "tdk/grid.h"

namespace tdk {

/// FFT-backed spectral operations on the tangential torus.
///
/// Conventions, fixed across the whole library:
///   forward:  f_hat(xi_k) = integral f(x) e^{-i xi_k x} dx
///             realized as dx * (-1)^k * DFT_k(samples), the sign flip being
///             the phase of the left endpoint x_0 = -pi L_x;
///   inverse:  f(x_i) = (dxi / 2 pi) * sum_k f_hat(xi_k) e^{i xi_k x_i};
///   convolve: (f * g)_k = (1 / (2 pi L_x)) sum_m f_m g_{k-m} over the
///             dealiased band |m|, |k-m|, |k| <= (N-1)/3, so that products
///             of physical samples correspond exactly to convolutions of
///             coefficients.
/// Round trips are exact to machine precision because dx * dxi * N = 2 pi.
class Fourier {
public:
  explicit Fourier(const Grid& grid);
  ~Fourier();

  Fourier(const Fourier&) = delete;
  Fourier& operator=(const Fourier&) = delete;

  const Grid& grid() const { return grid_; }

  /// Physical samples (x-major for fields: sample i*n_y + j is x_i, y_j)
  /// to Fourier coefficients.
  void forward(const std::vector<complex>& physical, SpectralField& out) const;
  void forward(const std::vector<complex>& physical, SurfaceSpectrum& out) const;

  /// Fourier coefficients to physical samples at the collocation points.
  void inverse(const SpectralField& f, std::vector<complex>& physical) const;
  void inverse(const SurfaceSpectrum& f, std::vector<complex>& physical) const;

  /// Dealiased quadratic product, (1/(2 pi L_x)) sum_m f_m g_{k-m}; the
  /// 2/3-band projector is applied to both inputs and to the result.
  void convolve(const SpectralField& f, const SpectralField& g,
                SpectralField& out) const;
  void convolve(const SurfaceSpectrum& f, const SurfaceSpectrum& g,
                SurfaceSpectrum& out) const;
  void convolve(const SurfaceSpectrum& f, const SpectralField& g,
                SpectralField& out) const;

private:
  Grid grid_;
  void* plan_fwd_line_;   // fftw_plan over one length-N line
  void* plan_inv_line_;
  mutable std::vector<complex> line_in_;
  mutable std::vector<complex> line_out_;
  mutable std::vector<complex> scratch_a_;
  mutable std::vector<complex> scratch_b_;
  mutable std::vector<complex> scratch_c_;

  void dft_lines(const complex* in, complex* out, std::size_t n_lines,
                 bool forward_dir) const;
};

/// Multiplies every coefficient by m(xi_k); the multiplier sees the physical
/// frequency, not the integer wavenumber.
void apply_multiplier(const Grid& grid, const std::function<complex(double)>& m,
                      SpectralField& f);
void apply_multiplier(const Grid& grid, const std::function<complex(double)>& m,
                      SurfaceSpectrum& f);

/// Zeroes every mode outside the 2/3-rule band |k| <= (N-1)/3.
void dealias(const Grid& grid, SpectralField& f);
void dealias(const Grid& grid, SurfaceSpectrum& f);

/// i xi_k f (spectral x-derivative).
void ddx(const Grid& grid, const SpectralField& f, SpectralField& out);
void ddx(const Grid& grid, const SurfaceSpectrum& f, SurfaceSpectrum& out);

}  // namespace tdk
