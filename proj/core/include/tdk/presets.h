#pragma once

#include <functional>
#include <memory>

#include "tdk/bo.h"
#include "tdk/config.h"
#include "tdk/deck_terms.h"
#include "tdk/fourier.h"
#include "tdk/grid.h"

namespace tdk {

/// Initial data plus the stepper wiring a named preset implies.  Source
/// closures (when set) capture the shared fourier object and the eps handle,
/// so a later relaxation-parameter selection stays consistent with them.
struct PresetBundle {
  std::shared_ptr<Fourier> fourier;
  DeckState state;
  double tau0 = 0.1;
  bool evolve_wbar = true;
  bool nonlinear_terms = true;
  bool forced_bo = true;
  std::function<SpectralField(double)> source_w;
  std::function<SurfaceSpectrum(double)> source_A;
  std::shared_ptr<double> eps_handle;  // rebind point for certified selection
  SolitonInfo soliton;
  bool has_soliton = false;
};

/// Builds the named preset from the configuration:
///   small-data-certified:    Gaussian-modulated low modes, scaled so the
///                            composite X at radius 10 tau0 equals e0_target;
///   bo-soliton:              solitary displacement wave, column frozen;
///   heat-column:             mean-mode Gaussian, nonlinear terms off;
///   manufactured-convergence: forced run with a closed-form exact pair.
PresetBundle make_preset(const RunConfig& config);

/// The exact pair of the manufactured preset at time t (polynomial y-shape,
/// oscillating mode amplitudes), for convergence measurements.
DeckState manufactured_state(const Grid& grid, double t, double eps,
                             double amplitude);

/// Its exact time derivative (coefficient derivatives times the same
/// shapes); used to assemble the manufacturing sources.
void manufactured_tendency(const Grid& grid, double t, double amplitude,
                           SpectralField& dt_wbar, SurfaceSpectrum& dt_A);

}  // namespace tdk
