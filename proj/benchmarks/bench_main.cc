#include <benchmark/benchmark.h>

#include <random>

#include "tdk/audit.h"
#include "tdk/deck_terms.h"
#include "tdk/field.h"
#include "tdk/fourier.h"
#include "tdk/norms.h"
#include "tdk/stepper.h"
#include "tdk/weights.h"

namespace {

tdk::DeckState random_state(const tdk::Grid& grid, double amp) {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  tdk::DeckState s(grid);
  for (std::size_t i = 0; i < grid.n_modes(); ++i) {
    if (!grid.retained(i)) continue;
    const double decay =
        std::exp(-0.25 * std::abs(static_cast<double>(grid.wavenumber(i))));
    for (std::size_t j = 1; j + 1 < grid.n_y(); ++j) {
      const double y = grid.y(j);
      s.wbar(i, j) = amp * decay * y * std::exp(-0.5 * y * y) *
                     tdk::complex(uni(rng), uni(rng));
    }
    s.A[i] = amp * decay * tdk::complex(uni(rng), uni(rng));
  }
  tdk::enforce_hermitian(grid, s.wbar);
  tdk::enforce_hermitian(grid, s.A);
  return s;
}

void BM_Convolve(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  tdk::Grid grid(n, 20.0, 64, 12.0);
  tdk::Fourier fourier(grid);
  tdk::DeckState s = random_state(grid, 1.0);
  tdk::SpectralField out(grid);
  for (auto _ : state) {
    fourier.convolve(s.wbar, s.wbar, out);
    benchmark::DoNotOptimize(out.data());
  }
}
BENCHMARK(BM_Convolve)->Arg(64)->Arg(128)->Arg(256);

void BM_ColumnTerm(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  tdk::Grid grid(n, 20.0, 64, 12.0);
  tdk::DeckState s = random_state(grid, 1.0);
  tdk::ThetaBank bank = tdk::make_theta_bank(grid, 0.01, s.eps);
  for (auto _ : state) {
    tdk::SpectralField l = tdk::term_L(grid, s.wbar, s.A, bank, 1);
    benchmark::DoNotOptimize(l.data());
  }
}
BENCHMARK(BM_ColumnTerm)->Arg(32)->Arg(64)->Arg(128);

void BM_Step(benchmark::State& state) {
  tdk::Grid grid(64, 20.0, 128, 12.0);
  tdk::Fourier fourier(grid);
  tdk::DeckState s = random_state(grid, 1e-2);
  tdk::StepperConfig sc;
  sc.dt = 1e-4;
  sc.t_end = 2e-4;
  sc.ledger_cadence = 0;
  sc.lemma_cadence = 0;
  for (auto _ : state) {
    tdk::Stepper stepper(fourier, sc);
    tdk::RunResult res = stepper.run(s, 0.1);
    benchmark::DoNotOptimize(res.state.wbar.data());
  }
}
BENCHMARK(BM_Step);

void BM_NormBattery(benchmark::State& state) {
  tdk::Grid grid(128, 20.0, 256, 12.0);
  tdk::DeckState s = random_state(grid, 1.0);
  tdk::NormParams np;
  for (auto _ : state) {
    tdk::CompositeNorms cn = tdk::composite_norms(grid, s, np);
    benchmark::DoNotOptimize(cn.X);
  }
}
BENCHMARK(BM_NormBattery);

}  // namespace

BENCHMARK_MAIN();
