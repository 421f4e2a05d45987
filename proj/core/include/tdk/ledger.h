#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace tdk {

/// One sampled instant of the monitored quantities.  The T_* columns are the
/// real parts of the weighted inner products entering the energy identities;
/// the residual columns are finalized after the run (centered differences
/// need both neighbors) and hold NaN on the first and last rows.
struct LedgerRow {
  double t = 0.0;
  double tau = 0.0;
  double X = 0.0;
  double Y = 0.0;
  double Z = 0.0;
  double H = 0.0;
  double E = 0.0;
  double Gamma1 = 0.0;
  double Gamma2 = 0.0;
  double T_A1 = 0.0;
  double T_A2 = 0.0;
  double T_N = 0.0;
  double T_L = 0.0;
  double T_M = 0.0;
  double T_B = 0.0;
  double T_dyN = 0.0;
  double T_dyL = 0.0;
  double T_dyM = 0.0;
  double T_dyB = 0.0;
  double residual_A = 0.0;
  double residual_w = 0.0;
  double residual_vort = 0.0;
};

struct EnergyLedger {
  std::vector<LedgerRow> rows;

  void append(const LedgerRow& row);
  bool empty() const { return rows.empty(); }
  std::size_t size() const { return rows.size(); }
};

/// Column order of the CSV serialization; fixed, with a header line.
extern const char* const kLedgerColumns;

/// Writes the ledger with "%.17g" formatting (round-trip exact doubles).
void write_ledger_csv(const EnergyLedger& ledger, const std::string& path);

/// Parses a CSV produced by write_ledger_csv; throws on malformed input.
EnergyLedger read_ledger_csv(const std::string& path);

}  // namespace tdk
