#include <random>

#include <benchmark/benchmark.h>
#include <omp.h>

#include "bbfem/dg.hpp"
#include "bbfem/mass_solve.hpp"

using namespace bbfem;

namespace {

void run_rhs(benchmark::State& state, Schedule schedule)
{
    const int n = static_cast<int>(state.range(0));
    static const SimplexMesh mesh = build_structured_mesh(32, true);
    const AcousticsDG dg(mesh, n);
    AcousticState u = dg.zero_state(), out = dg.zero_state();
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    for (double& x : u.data())
        x = dist(rng);
    for (auto _ : state) {
        dg.rhs(u, out, schedule);
        benchmark::DoNotOptimize(out.data().data());
    }
    state.counters["dofs"] = static_cast<double>(u.data().size());
    state.counters["threads"] = schedule == Schedule::parallel ? omp_get_max_threads() : 1;
}

void BM_RhsSerial(benchmark::State& state) { run_rhs(state, Schedule::serial); }
void BM_RhsParallel(benchmark::State& state) { run_rhs(state, Schedule::parallel); }

void BM_BlockSolve(benchmark::State& state)
{
    const int n = static_cast<int>(state.range(0));
    const BlockLDLt fac(2, n);
    std::vector<double> y(fac.size(), 1.0);
    for (auto _ : state) {
        fac.solve_in_place(y);
        benchmark::DoNotOptimize(y.data());
    }
}

} // namespace

BENCHMARK(BM_RhsSerial)->DenseRange(1, 15, 2)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RhsParallel)->DenseRange(1, 15, 2)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BlockSolve)->DenseRange(1, 15, 2)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
