#include <cstdint>

#include <benchmark/benchmark.h>

#include "ladder/dressed.hpp"
#include "ladder/fock_window.hpp"
#include "ladder/model.hpp"
#include "ladder/trilevel.hpp"

namespace {

constexpr std::int64_t kN0 = 100'000'000;

ladder::ModelParams params() {
  return ladder::ModelParams::from_couplings(0.0, 11.0, 24.0, 0.4, 0.12, kN0);
}

void BM_Eigenvalues(benchmark::State& state) {
  const ladder::ModelParams p = params();
  double y = -1e4;
  for (auto _ : state) {
    benchmark::DoNotOptimize(ladder::eigenvalues_at(p, y));
    y += 0.37;
    if (y > 1e4) y = -1e4;
  }
}
BENCHMARK(BM_Eigenvalues);

void BM_WkbEnergies(benchmark::State& state) {
  const ladder::ModelParams p = params();
  for (auto _ : state) benchmark::DoNotOptimize(ladder::wkb_dressed_energies(p, kN0));
}
BENCHMARK(BM_WkbEnergies)->Unit(benchmark::kMillisecond);

void BM_BandedEigenNear(benchmark::State& state) {
  const ladder::ModelParams p = params();
  const auto h = ladder::build_hamiltonian(p, kN0, state.range(0), ladder::Parity::even);
  for (auto _ : state) benchmark::DoNotOptimize(ladder::eigen_near(h, 0.0, 9));
  state.counters["dimension"] = static_cast<double>(h.dimension());
}
BENCHMARK(BM_BandedEigenNear)->Arg(100)->Arg(200)->Arg(400)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
