#include <benchmark/benchmark.h>

#include <limits>

#include "hsob/corpus.hpp"
#include "hsob/field.hpp"

using namespace hsob;

namespace {

SampledField field(int n) {
    auto cloud = std::make_shared<const MetricCloud>(MetricCloud::unit_grid(n, 2));
    return SampledField::from_function(cloud, corpus_function("sine_high", 2).fn);
}

std::vector<double> no_caps(const SampledField& f) {
    return std::vector<double>(f.size(), std::numeric_limits<double>::infinity());
}

void hl_parallel(benchmark::State& state) {
    const SampledField f = field(static_cast<int>(state.range(0)));
    const auto caps = no_caps(f);
    for (auto _ : state) benchmark::DoNotOptimize(hl_maximal(f, caps).values.data());
}

void hl_reference(benchmark::State& state) {
    const SampledField f = field(static_cast<int>(state.range(0)));
    const auto caps = no_caps(f);
    for (auto _ : state) benchmark::DoNotOptimize(hl_maximal_reference(f, caps).values.data());
}

void smooth_parallel(benchmark::State& state) {
    const SampledField f = field(static_cast<int>(state.range(0)));
    const TestFamily fam = TestFamily::dyadic(2, 2.0 * f.cloud->resolution(), 0.5);
    for (auto _ : state) benchmark::DoNotOptimize(smooth_maximal(f, fam, 0.5).values.data());
}

void smooth_reference(benchmark::State& state) {
    const SampledField f = field(static_cast<int>(state.range(0)));
    const TestFamily fam = TestFamily::dyadic(2, 2.0 * f.cloud->resolution(), 0.5);
    for (auto _ : state) benchmark::DoNotOptimize(smooth_maximal_reference(f, fam, 0.5).values.data());
}

void grand_parallel(benchmark::State& state) {
    const SampledField f = field(static_cast<int>(state.range(0)));
    const TestFamily fam = TestFamily::dyadic(2, 2.0 * f.cloud->resolution(), 0.25)
                               .with_member(TestFamily::cone_member())
                               .with_member(TestFamily::shifted_member(0.5, 0, 1));
    for (auto _ : state) benchmark::DoNotOptimize(grand_maximal(f, fam, 0.25, GrandMode::pointwise_cap).values.values.data());
}

void grand_reference(benchmark::State& state) {
    const SampledField f = field(static_cast<int>(state.range(0)));
    const TestFamily fam = TestFamily::dyadic(2, 2.0 * f.cloud->resolution(), 0.25)
                               .with_member(TestFamily::cone_member())
                               .with_member(TestFamily::shifted_member(0.5, 0, 1));
    for (auto _ : state) {
        benchmark::DoNotOptimize(grand_maximal_reference(f, fam, 0.25, GrandMode::pointwise_cap).values.values.data());
    }
}

}  // namespace

BENCHMARK(hl_parallel)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(hl_reference)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(smooth_parallel)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(smooth_reference)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(grand_parallel)->Arg(32)->Unit(benchmark::kMillisecond);
BENCHMARK(grand_reference)->Arg(32)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
