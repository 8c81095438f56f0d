#include "utilscal/utility.hpp"

#include <benchmark/benchmark.h>

namespace {

using utilscal::UtilityFunction;
using utilscal::Vector;

UtilityFunction make(int family)
{
    const Vector alpha = Vector::Constant(3, 1.0 / 3.0);
    switch (family) {
    case 0: return UtilityFunction::cobb_douglas(alpha);
    case 1: return UtilityFunction::ces(Vector::Ones(3), -0.5, 1.0);
    default: return UtilityFunction::leontief(alpha);
    }
}

void BM_UtilityValue(benchmark::State& state)
{
    const auto u = make(static_cast<int>(state.range(0)));
    const Vector y{{0.3, 0.7, 1.1}};
    for (auto _ : state) benchmark::DoNotOptimize(utilscal::utility_value(u, y));
    state.SetLabel(u.label());
}
BENCHMARK(BM_UtilityValue)->DenseRange(0, 2);

void BM_UtilityGradient(benchmark::State& state)
{
    const auto u = make(static_cast<int>(state.range(0)));
    const Vector y{{0.3, 0.7, 1.1}};
    for (auto _ : state) benchmark::DoNotOptimize(utilscal::utility_gradient(u, y));
    state.SetLabel(u.label());
}
BENCHMARK(BM_UtilityGradient)->DenseRange(0, 1);

}  // namespace

BENCHMARK_MAIN();
