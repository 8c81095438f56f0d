#include "utilscal/problem.hpp"

#include <benchmark/benchmark.h>

#include <random>

namespace {

void BM_ProjectBoxSimplex(benchmark::State& state)
{
    const auto n = static_cast<utilscal::Index>(state.range(0));
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    utilscal::Vector v(n);
    for (auto& x : v) x = dist(rng);
    for (auto _ : state) benchmark::DoNotOptimize(utilscal::project_box_simplex(v));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_ProjectBoxSimplex)->RangeMultiplier(4)->Range(4, 4096)->Complexity();

}  // namespace

BENCHMARK_MAIN();
