#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

#include "tdk/norms.h"

namespace tdk {

/// Raised for malformed or inconsistent run configuration; the CLI maps it
/// to its configuration-error exit code.
class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Flat key=value configuration with [grid]/[model]/[stepper]/[initial]/
/// [output]/[reconstruct] sections.  A run is reproducible from these values
/// alone; the only environment influence allowed is an output-directory
/// override on the command line.
struct RunConfig {
  // [grid]
  std::size_t n_modes = 64;
  double half_length = 20.0;
  std::size_t n_y = 256;
  double y_max = 12.0;

  // [model]
  double tau0 = 0.1;
  double r = 2.5;
  double delta_override = 0.0;  // 0 = derive
  double eps_override = 0.0;    // 0 = derive
  double t_star_override = 0.0; // 0 = derive
  EstimateConstants constants;
  double e0_target = 1e-2;      // initial-data scale of the certified preset

  // [stepper]
  double dt = 2e-4;
  double t_end = 0.1;
  std::string scheme = "strang-cn-ab2";
  bool certified = false;
  int threads = 1;

  // [initial]
  std::string preset = "small-data-certified";
  std::string resume_path;
  double soliton_speed = 0.25;
  double soliton_x0 = 0.0;
  double soliton_tail_tol = 1e-6;
  double amplitude = 1.0;

  // [output]
  std::string output_dir = "out";
  std::size_t ledger_cadence = 1;
  std::size_t checkpoint_cadence = 0;
  std::size_t lemma_cadence = 50;
  std::string formats = "csv,json";

  // [reconstruct]
  double nu = 1e-3;
  std::size_t n_ybar = 129;
  double ybar_max = 6.0;
  std::size_t n_ytilde = 65;
  double ytilde_max = 4.0;
};

/// Parses configuration text.  Preset defaults (grid shape, window, step)
/// are installed from the [initial] preset first; explicit keys override
/// them.  Unknown keys are errors.
RunConfig parse_run_config_text(const std::string& text);

/// File-reading wrapper around parse_run_config_text.
RunConfig parse_run_config(const std::string& path);

/// Installs the named preset's grid/window/step defaults on a fresh config.
void apply_preset_defaults(const std::string& preset, RunConfig& config);

/// Structural checks that do not need field data; throws ConfigError.
void validate_run_config(const RunConfig& config);

}  // namespace tdk
