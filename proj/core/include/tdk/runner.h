#pragma once

#include <string>

#include "tdk/config.h"

namespace tdk {

/// Process exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfigError = 1;
inline constexpr int kExitBlowUp = 2;
inline constexpr int kExitRadiusExhausted = 3;
inline constexpr int kExitCorruptCheckpoint = 4;

/// Command-line layer on top of the file configuration.  Empty strings and
/// zero threads mean "no override"; a named preset replaces the one in the
/// file together with its grid/window defaults.
struct CliOptions {
  std::string config_path;
  std::string output_dir;
  std::string preset;
  std::string resume;
  int threads = 0;
  bool certified = false;
};

/// Resolves file plus flag overrides into one validated configuration.
/// Throws ConfigError on any defect, before any output is produced.
RunConfig resolve_config(const CliOptions& options);

/// Time integration with ledger/audit/manifest/checkpoint outputs.
int cmd_run(const CliOptions& options);

/// Recomputes norm and term columns at every stored checkpoint of a prior
/// run directory and reports the worst mismatch against its ledger.
int cmd_audit(const CliOptions& options);

/// Solitary-wave propagation study with invariant-drift report.
int cmd_bo(const CliOptions& options);

/// Base-profile solve with CSV/JSON outputs.
int cmd_blasius(const CliOptions& options);

/// Three-deck composite fields and matching-overlap study at [reconstruct]
/// viscosity.
int cmd_reconstruct(const CliOptions& options);

/// Fast built-in checks, one PASS/FAIL line each; nonzero when any fail.
int cmd_selftest(const CliOptions& options);

}  // namespace tdk
