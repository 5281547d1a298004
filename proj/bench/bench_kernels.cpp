// Serial references against the OpenMP kernels. Set OMP_NUM_THREADS to compare.
#include <benchmark/benchmark.h>

#include "qbethe/bethe.hpp"
#include "qbethe/continuum.hpp"
#include "qbethe/hall_littlewood.hpp"
#include "qbethe/kernels.hpp"
#include "qbethe/transfer.hpp"

using namespace qbethe;

namespace {

template <bool Parallel>
void transfer_matrix(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  const ModelParams p = ModelParams::defaults(m, 3);
  const SectorPtr s = enumerate_sector(3, m);
  const OperatorAction op = [&](const FockVector& f) { return apply_transfer(0.7, f, p); };
  for (auto _ : state) {
    auto mat = Parallel ? operator_matrix(op, s, s) : operator_matrix_serial(op, s, s);
    benchmark::DoNotOptimize(mat.entries.data());
  }
  state.counters["dim"] = static_cast<double>(s->size());
}

template <bool Parallel>
void gram_matrix(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  const ModelParams p = ModelParams::defaults(m, 3);
  std::vector<FockVector> waves;
  for (const SpectralPoint& pt : solve_sector(p)) waves.push_back(wave_by_branching(SpectralVariables::from_xi(pt.xi), p));
  for (auto _ : state) {
    auto g = Parallel ? gram(waves, p.t) : gram_serial(waves, p.t);
    benchmark::DoNotOptimize(g.data());
  }
}

template <bool Parallel>
void sector_solve(benchmark::State& state) {
  const ModelParams p = ModelParams::defaults(static_cast<int>(state.range(0)), 3);
  for (auto _ : state) {
    auto pts = Parallel ? solve_sector(p) : solve_sector_serial(p);
    benchmark::DoNotOptimize(pts.data());
  }
}

template <bool Parallel>
void sweep(benchmark::State& state) {
  const ContinuumParams c = ContinuumParams::make(2, 1, 1, 1);
  const std::vector<int> ms{8, 16, 32};
  for (auto _ : state) {
    auto rep = Parallel ? convergence_sweep(Partition{1, 0}, c, ms) : convergence_sweep_serial(Partition{1, 0}, c, ms);
    benchmark::DoNotOptimize(rep.rows.data());
  }
}

}  // namespace

BENCHMARK(transfer_matrix<false>)->Arg(4)->Arg(6)->Unit(benchmark::kMillisecond);
BENCHMARK(transfer_matrix<true>)->Arg(4)->Arg(6)->Unit(benchmark::kMillisecond);
BENCHMARK(gram_matrix<false>)->Arg(4)->Arg(6)->Unit(benchmark::kMillisecond);
BENCHMARK(gram_matrix<true>)->Arg(4)->Arg(6)->Unit(benchmark::kMillisecond);
BENCHMARK(sector_solve<false>)->Arg(4)->Arg(6)->Unit(benchmark::kMillisecond);
BENCHMARK(sector_solve<true>)->Arg(4)->Arg(6)->Unit(benchmark::kMillisecond);
BENCHMARK(sweep<false>)->Unit(benchmark::kMillisecond);
BENCHMARK(sweep<true>)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
