#include "tdk/ledger.h"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace tdk {

const char* const kLedgerColumns =
    "t,tau,X,Y,Z,H,E,Gamma1,Gamma2,T_A1,T_A2,T_N,T_L,T_M,T_B,"
    "T_dyN,T_dyL,T_dyM,T_dyB,residual_A,residual_w,residual_vort";

namespace {

constexpr std::size_t kColumnCount = 22;

void row_values(const LedgerRow& r, double* v) {
  v[0] = r.t;
  v[1] = r.tau;
  v[2] = r.X;
  v[3] = r.Y;
  v[4] = r.Z;
  v[5] = r.H;
  v[6] = r.E;
  v[7] = r.Gamma1;
  v[8] = r.Gamma2;
  v[9] = r.T_A1;
  v[10] = r.T_A2;
  v[11] = r.T_N;
  v[12] = r.T_L;
  v[13] = r.T_M;
  v[14] = r.T_B;
  v[15] = r.T_dyN;
  v[16] = r.T_dyL;
  v[17] = r.T_dyM;
  v[18] = r.T_dyB;
  v[19] = r.residual_A;
  v[20] = r.residual_w;
  v[21] = r.residual_vort;
}

void set_row_values(LedgerRow& r, const double* v) {
  r.t = v[0];
  r.tau = v[1];
  r.X = v[2];
  r.Y = v[3];
  r.Z = v[4];
  r.H = v[5];
  r.E = v[6];
  r.Gamma1 = v[7];
  r.Gamma2 = v[8];
  r.T_A1 = v[9];
  r.T_A2 = v[10];
  r.T_N = v[11];
  r.T_L = v[12];
  r.T_M = v[13];
  r.T_B = v[14];
  r.T_dyN = v[15];
  r.T_dyL = v[16];
  r.T_dyM = v[17];
  r.T_dyB = v[18];
  r.residual_A = v[19];
  r.residual_w = v[20];
  r.residual_vort = v[21];
}

}  // namespace

void EnergyLedger::append(const LedgerRow& row) {
  if (!rows.empty() && !(row.t > rows.back().t))
    throw std::invalid_argument("ledger: timestamps must strictly increase");
  rows.push_back(row);
}

void write_ledger_csv(const EnergyLedger& ledger, const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (f == nullptr)
    throw std::runtime_error("ledger: cannot open for writing: " + path);
  std::fprintf(f, "%s\n", kLedgerColumns);
  double v[kColumnCount];
  for (const LedgerRow& row : ledger.rows) {
    row_values(row, v);
    for (std::size_t c = 0; c < kColumnCount; ++c)
      std::fprintf(f, c == 0 ? "%.17g" : ",%.17g", v[c]);
    std::fprintf(f, "\n");
  }
  std::fclose(f);
}

EnergyLedger read_ledger_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("ledger: cannot open for reading: " + path);
  std::string line;
  if (!std::getline(in, line) || line != kLedgerColumns)
    throw std::runtime_error("ledger: unexpected header in " + path);

  EnergyLedger ledger;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ss(line);
    double v[kColumnCount];
    std::string cell;
    for (std::size_t c = 0; c < kColumnCount; ++c) {
      if (!std::getline(ss, cell, ','))
        throw std::runtime_error("ledger: short row in " + path);
      v[c] = std::strtod(cell.c_str(), nullptr);
    }
    LedgerRow row;
    set_row_values(row, v);
    ledger.rows.push_back(row);
  }
  return ledger;
}

}  // namespace tdk
