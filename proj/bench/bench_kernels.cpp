// Serial reference kernels against their OpenMP counterparts.

#include "chanspec/limitset.hpp"
#include "chanspec/pencil.hpp"
#include "chanspec/presets.hpp"
#include "chanspec/spectra.hpp"

#include <benchmark/benchmark.h>

using namespace chanspec;

namespace {

Execution mode(const benchmark::State& state)
{
    return state.range(0) == 0 ? Execution::Serial : Execution::Parallel;
}

void label(benchmark::State& state)
{
    state.SetLabel(state.range(0) == 0 ? "serial" : "openmp x" + std::to_string(thread_count()));
}

void BM_LogTable(benchmark::State& state)
{
    AnalyticFamily fam = family_from_subsets(subset_family(presets::chords(3)));
    Box box = initial_box(fam);
    const int grid = static_cast<int>(state.range(1));
    for (auto _ : state) {
        benchmark::DoNotOptimize(log_table(fam, box, grid, mode(state)));
    }
    label(state);
}
BENCHMARK(BM_LogTable)->ArgsProduct({{0, 1}, {400, 800}})->Unit(benchmark::kMillisecond);

void BM_AberthRound(benchmark::State& state)
{
    const long n = state.range(1);
    SubsetFamily sf = subset_family(presets::h2k1());
    const Precision bits = 128;
    FactoredSum f = sf.at(n, bits);
    EvalFn eval = f.factory()(bits);
    AberthState start;
    start.z = ring_seeds({1.0, 0.0}, 6.0, f.degree(), bits);
    start.residual.assign(start.z.size(), 1.0);
    start.done.assign(start.z.size(), 0);
    for (auto _ : state) {
        AberthState s = start;
        benchmark::DoNotOptimize(aberth_round(eval, s, bits, mode(state)));
    }
    label(state);
}
BENCHMARK(BM_AberthRound)->ArgsProduct({{0, 1}, {50, 200}})->Unit(benchmark::kMillisecond);

void BM_ResolventGrid(benchmark::State& state)
{
    GraphSpec spec = presets::h2k1();
    Box box{-4, 8, -5, 5};
    const int pts = static_cast<int>(state.range(1));
    for (auto _ : state) {
        benchmark::DoNotOptimize(resolvent_grid(spec, 10, box, pts, pts, 20, mode(state)));
    }
    label(state);
}
BENCHMARK(BM_ResolventGrid)->ArgsProduct({{0, 1}, {16, 32}})->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
