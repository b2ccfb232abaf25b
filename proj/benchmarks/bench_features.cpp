#include <benchmark/benchmark.h>

#include "tsplab/features.hpp"
#include "tsplab/geometry.hpp"
#include "tsplab/instance.hpp"
#include "tsplab/rng.hpp"

namespace {

tsplab::Instance instance_of(int n) {
    tsplab::RngStream rng(42);
    return tsplab::random_instance(n, rng);
}

void bm_extract_features(benchmark::State& state) {
    const tsplab::Instance inst = instance_of(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(tsplab::extract_features(inst));
}
BENCHMARK(bm_extract_features)->Arg(15)->Arg(50)->Arg(100)->Arg(200);

void bm_minimum_spanning_tree(benchmark::State& state) {
    const tsplab::Instance inst = instance_of(static_cast<int>(state.range(0)));
    const tsplab::DistanceMatrix dm = tsplab::distance_matrix(inst);
    for (auto _ : state) benchmark::DoNotOptimize(tsplab::minimum_spanning_tree(dm).total_weight);
}
BENCHMARK(bm_minimum_spanning_tree)->Arg(50)->Arg(200);

void bm_gdbscan(benchmark::State& state) {
    const tsplab::Instance inst = instance_of(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(tsplab::gdbscan(inst, 0.05, 3));
}
BENCHMARK(bm_gdbscan)->Arg(50)->Arg(200);

} // namespace

BENCHMARK_MAIN();
