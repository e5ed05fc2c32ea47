#include <benchmark/benchmark.h>

#include "facegal/protocol.hpp"
#include "facegal/synth.hpp"
#include "facegal/threshold_policy.hpp"

using namespace facegal;

namespace {

std::vector<LabeledEmbedding> dataset(std::size_t count) {
    const int classes = std::max<int>(1, static_cast<int>(count) / 3);
    return generate({classes, 128, SamplesPerClass::fixed(3), 0.5, 777});
}

} // namespace

static void BM_protocol_adaptive(benchmark::State& state) {
    const auto data = dataset(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        const auto report = run_protocol(data, ThresholdPolicy::adaptive(), 0.3779);
        benchmark::DoNotOptimize(report.final_acc);
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(data.size()));
}
BENCHMARK(BM_protocol_adaptive)->Arg(512)->Arg(2048)->Unit(benchmark::kMillisecond);

static void BM_protocol_fixed(benchmark::State& state) {
    const auto data = dataset(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        const auto report = run_protocol(data, ThresholdPolicy::fixed(0.3779), 0.3779);
        benchmark::DoNotOptimize(report.final_acc);
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(data.size()));
}
BENCHMARK(BM_protocol_fixed)->Arg(512)->Arg(2048)->Unit(benchmark::kMillisecond);

static void BM_calibrate(benchmark::State& state) {
    const auto data = dataset(2048);
    const auto pairs = sample_pairs(data, static_cast<std::size_t>(state.range(0)), 5);
    for (auto _ : state) {
        const auto result = calibrate_fixed_threshold(pairs, 10, 7);
        benchmark::DoNotOptimize(result.threshold);
    }
}
BENCHMARK(BM_calibrate)->Arg(600)->Arg(6000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
