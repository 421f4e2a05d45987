#pragma once

#include <stdexcept>
#include <string>

#include "tdk/field.h"

namespace tdk {

/// Raised on any structural defect of a checkpoint file: bad magic, bad
/// length, or checksum mismatch.
class CorruptCheckpointError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Everything needed to resume a run.  Scalars mirror the stepper inputs;
/// half_length is the torus parameter L_x.
struct CheckpointData {
  double t = 0.0;
  double tau = 0.0;
  double eps = 0.0;
  double delta = 0.0;
  double r = 0.0;
  double half_length = 0.0;
  double y_max = 0.0;
  SpectralField wbar;
  SurfaceSpectrum A;
};

/// Binary layout, all little-endian:
///   magic "TDKSIM01" | u64 n_modes, n_y | f64 t, tau, eps, delta, r,
///   L_x, y_max | wbar as re/im f64 pairs (mode-major) | A as re/im pairs |
///   u32 CRC-32 (polynomial 0xEDB88320) of every preceding byte.
/// Round trips are byte-identical.
void checkpoint_write(const std::string& path, const CheckpointData& data);
CheckpointData checkpoint_read(const std::string& path);

}  // namespace tdk
