#include <benchmark/benchmark.h>

#include "tsplab/geometry.hpp"
#include "tsplab/instance.hpp"
#include "tsplab/rng.hpp"
#include "tsplab/solver.hpp"

namespace {

tsplab::Instance instance_of(int n) {
    tsplab::RngStream rng(42);
    return tsplab::random_instance(n, rng);
}

void bm_two_opt(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const tsplab::DistanceMatrix dm = tsplab::distance_matrix(instance_of(n));
    tsplab::RngStream rng(7);
    for (auto _ : state) {
        const tsplab::Tour start = tsplab::random_tour(n, rng);
        benchmark::DoNotOptimize(tsplab::two_opt(dm, start).length);
    }
}
BENCHMARK(bm_two_opt)->Arg(15)->Arg(25)->Arg(50)->Arg(100);

void bm_exact_tour(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const tsplab::DistanceMatrix dm = tsplab::distance_matrix(instance_of(n));
    for (auto _ : state) benchmark::DoNotOptimize(tsplab::exact_tour(dm).length);
}
BENCHMARK(bm_exact_tour)->DenseRange(10, 18, 2)->Unit(benchmark::kMillisecond);

void bm_compute_fitness(benchmark::State& state) {
    const tsplab::Instance inst = instance_of(15);
    const tsplab::DistanceMatrix dm = tsplab::distance_matrix(inst);
    const double optimal = tsplab::exact_tour(dm).length;
    tsplab::RngStream rng(7);
    for (auto _ : state) {
        tsplab::RngStream sub = rng.child(static_cast<std::uint64_t>(state.iterations()));
        benchmark::DoNotOptimize(tsplab::compute_fitness(dm, optimal, 50, sub).ratio);
    }
}
BENCHMARK(bm_compute_fitness)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
