#include "tdk/grid.h"

#include <cmath>
#include <stdexcept>

namespace tdk {

namespace {

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

}  // namespace

Grid::Grid(std::size_t n_modes, double domain_half_length, std::size_t n_y,
           double y_max)
    : n_modes_(n_modes), half_length_(domain_half_length), n_y_(n_y),
      y_max_(y_max) {
  if (n_modes_ < 8 || !is_power_of_two(n_modes_))
    throw std::invalid_argument("grid: n_modes must be a power of two >= 8");
  if (n_y_ < 16)
    throw std::invalid_argument("grid: n_y must be at least 16");
  if (!(half_length_ > 0.0))
    throw std::invalid_argument("grid: domain half-length must be positive");
  if (!(y_max_ >= 8.0))
    throw std::invalid_argument("grid: y_max must be at least 8");
  dy_ = y_max_ / static_cast<double>(n_y_ - 1);
  dx_ = 2.0 * M_PI * half_length_ / static_cast<double>(n_modes_);
}

double Grid::x(std::size_t i) const {
  return -M_PI * half_length_ + dx_ * static_cast<double>(i);
}

std::vector<double> Grid::y_nodes() const {
  std::vector<double> nodes(n_y_);
  for (std::size_t j = 0; j < n_y_; ++j) nodes[j] = y(j);
  return nodes;
}

}  // namespace tdk
