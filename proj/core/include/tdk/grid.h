#pragma once

#include <cstddef>
#include <vector>

namespace tdk {

/// Discretization of the tangential torus x in [-pi*L_x, pi*L_x) and the
/// truncated normal interval y in [0, y_max].
///
/// Tangential modes are stored in FFT order: storage index i in [0, n_modes)
/// holds integer wavenumber k = i for i < n_modes/2 and k = i - n_modes
/// otherwise, with physical frequency xi_k = k / L_x.  Conjugate mode pairs
/// are i <-> n_modes - i; the Nyquist index n_modes/2 is kept identically
/// zero by every producer in this library.
class Grid {
public:
  Grid(std::size_t n_modes, double domain_half_length, std::size_t n_y,
       double y_max);

  std::size_t n_modes() const { return n_modes_; }
  std::size_t n_y() const { return n_y_; }
  double half_length() const { return half_length_; }
  double y_max() const { return y_max_; }
  double dy() const { return dy_; }
  double dx() const { return dx_; }
  /// Mode spacing in xi; also the quadrature weight of all dxi integrals.
  double dxi() const { return 1.0 / half_length_; }

  /// Signed integer wavenumber of storage index i (FFT order).
  long wavenumber(std::size_t i) const {
    return i < n_modes_ / 2 ? static_cast<long>(i)
                            : static_cast<long>(i) - static_cast<long>(n_modes_);
  }
  /// Physical frequency xi_k = k / L_x of storage index i.
  double xi(std::size_t i) const {
    return static_cast<double>(wavenumber(i)) / half_length_;
  }
  /// Storage index of the conjugate partner (-k).
  std::size_t conj_index(std::size_t i) const {
    return i == 0 ? 0 : n_modes_ - i;
  }
  /// Largest |k| kept by the 2/3-rule dealiasing band.
  long dealias_limit() const {
    return static_cast<long>((n_modes_ - 1) / 3);
  }
  /// True if storage index i survives dealiasing (|k| <= dealias_limit).
  bool retained(std::size_t i) const {
    long k = wavenumber(i);
    return k >= -dealias_limit() && k <= dealias_limit();
  }

  double y(std::size_t j) const { return dy_ * static_cast<double>(j); }
  /// Physical collocation point x_i = -pi*L_x + i*dx.
  double x(std::size_t i) const;

  std::vector<double> y_nodes() const;

  bool operator==(const Grid& other) const {
    return n_modes_ == other.n_modes_ && n_y_ == other.n_y_ &&
           half_length_ == other.half_length_ && y_max_ == other.y_max_;
  }

private:
  std::size_t n_modes_;
  double half_length_;
  std::size_t n_y_;
  double y_max_;
  double dy_;
  double dx_;
};

}  // namespace tdk
