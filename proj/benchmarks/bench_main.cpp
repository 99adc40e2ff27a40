#include <benchmark/benchmark.h>

#include "parkfn/cayley.hpp"
#include "parkfn/rng.hpp"
#include "parkfn/stats.hpp"
#include "parkfn/walks.hpp"

namespace {

void BM_SampleUniformParking(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    parkfn::RandomStream rng(1);
    for (auto _ : state) {
        benchmark::DoNotOptimize(parkfn::cayley::sample_uniform_parking(n, rng));
    }
    state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_SampleUniformParking)->Arg(100)->Arg(1000)->Arg(10000)->Arg(100000);

void BM_PruferDecode(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    parkfn::RandomStream rng(2);
    std::vector<int> code(n - 1);
    for (int& c : code) c = static_cast<int>(rng.uniform_below(n + 1));
    for (auto _ : state) {
        benchmark::DoNotOptimize(parkfn::cayley::prufer_decode({code}));
    }
    state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_PruferDecode)->Arg(1000)->Arg(10000)->Arg(100000);

void BM_SampleExcursion(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    parkfn::RandomStream rng(3);
    for (auto _ : state) {
        benchmark::DoNotOptimize(parkfn::walks::sample_excursion(n, rng));
    }
    state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_SampleExcursion)->Arg(1000)->Arg(10000)->Arg(100000);

void BM_DpForward(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(parkfn::walks::dp_build(n));
    }
}
BENCHMARK(BM_DpForward)->Arg(50)->Arg(100)->Arg(200)->Arg(400);

void BM_MeanProfile(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(parkfn::walks::increment_mean_profile(n));
    }
}
BENCHMARK(BM_MeanProfile)->Arg(50)->Arg(100)->Arg(200);

void BM_TvExact(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            parkfn::stats::tv_distance(n, 1, parkfn::stats::Method::exact_dp));
    }
}
BENCHMARK(BM_TvExact)->Arg(50)->Arg(100)->Arg(200);

}  // namespace

BENCHMARK_MAIN();
