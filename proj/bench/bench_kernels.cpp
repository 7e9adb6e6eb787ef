#include <benchmark/benchmark.h>

#include "nldc/entanglement.hpp"
#include "nldc/units.hpp"

using namespace nldc;

namespace {

Execution mode(const benchmark::State& st) { return st.range(0) == 0 ? Execution::serial : Execution::parallel; }

void label(benchmark::State& st) { st.SetLabel(st.range(0) == 0 ? "serial" : "openmp"); }

void BM_total_rate(benchmark::State& st)
{
    const Setup s = make_setup(1000, 2.5, 1.0);
    IntegrationOptions io;
    io.divisions = 2;
    io.samples_per_stratum = 2;
    io.execution = mode(st);
    for (auto _ : st) benchmark::DoNotOptimize(total_rate(s, {}, RateMode::nonperturbative, {}, io).estimate.value);
    label(st);
}

void BM_concurrence_map(benchmark::State& st)
{
    const Setup s = make_setup(1000, 2.5, 1.0);
    std::vector<PhaseSpacePoint> grid;
    for (int i = 0; i < 8; ++i)
        for (int j = 0; j < 8; ++j)
            grid.push_back({units::MeV_to_natural(1.0), 0.05e-3 + 0.25e-3 * i, 0, 0.05e-3 + 0.25e-3 * j, 0});
    for (auto _ : st) benchmark::DoNotOptimize(concurrence_map(s, grid, RateMode::nonperturbative, {}, mode(st)));
    label(st);
}

void BM_genbessel(benchmark::State& st)
{
    for (auto _ : st) benchmark::DoNotOptimize(genbessel_batch({37.5, -12.25}, -200, 200));
}

} // namespace

BENCHMARK(BM_total_rate)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_concurrence_map)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_genbessel)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
