#include <benchmark/benchmark.h>

#include "facegal/gallery.hpp"
#include "facegal/synth.hpp"

using namespace facegal;

namespace {

std::vector<LabeledEmbedding> dataset(std::size_t count) {
    const int classes = static_cast<int>(count) / 4;
    return generate({classes, 128, SamplesPerClass::fixed(4), 0.5, 12345});
}

} // namespace

static void BM_enroll(benchmark::State& state) {
    const auto data = dataset(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        Gallery gallery(0.3779);
        for (const auto& item : data) gallery.enroll(item);
        benchmark::DoNotOptimize(gallery.entries().data());
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_enroll)->Arg(256)->Arg(1024)->Arg(4096)->Unit(benchmark::kMillisecond);

static void BM_recognize(benchmark::State& state) {
    const auto data = dataset(static_cast<std::size_t>(state.range(0)));
    Gallery gallery(0.3779);
    for (const auto& item : data) gallery.enroll(item);

    std::size_t i = 0;
    for (auto _ : state) {
        const auto result = gallery.recognize(data[i % data.size()].embedding);
        benchmark::DoNotOptimize(result.score);
        ++i;
    }
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_recognize)->Arg(256)->Arg(1024)->Arg(4096);

static void BM_brute_force_thresholds(benchmark::State& state) {
    const auto data = dataset(static_cast<std::size_t>(state.range(0)));
    Gallery gallery(0.3779);
    for (const auto& item : data) gallery.enroll(item);

    for (auto _ : state) {
        benchmark::DoNotOptimize(gallery.brute_force_thresholds().data());
    }
}
BENCHMARK(BM_brute_force_thresholds)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
