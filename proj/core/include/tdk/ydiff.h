#pragma once

#include "tdk/field.h"
#include "tdk/grid.h"

namespace tdk {

/// d/dy by second-order central differences; one-sided second-order
/// stencils at the two walls.
void ddy(const Grid& grid, const SpectralField& f, SpectralField& out);

/// d2/dy2 by the standard three-point stencil; one-sided second-order
/// stencils at the two walls.
void d2dy2(const Grid& grid, const SpectralField& f, SpectralField& out);

/// Fourth-order compact d2/dy2 on the interior under homogeneous Dirichlet
/// data: out = M^{-1} D f with M = tridiag(1/12, 10/12, 1/12) and D the
/// three-point stencil; wall rows are zero.  This is the exact discrete
/// diffusion generator of the Crank-Nicolson stepper, so balance audits
/// against it close at the integrator's order.
void numerov_d2dy2(const Grid& grid, const SpectralField& f,
                   SpectralField& out);

/// Cumulative trapezoid from the wall, out(y_j) = integral_0^{y_j} f dy'.
void integrate_y(const Grid& grid, const SpectralField& f, SpectralField& out);

/// Trapezoid value of the full column integral, integral_0^{y_max} f dy.
void integrate_y_full(const Grid& grid, const SpectralField& f,
                      SurfaceSpectrum& out);

}  // namespace tdk
