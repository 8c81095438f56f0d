#include "utilscal/pareto.hpp"
#include "utilscal/portfolio.hpp"

#include <benchmark/benchmark.h>

namespace {

using namespace utilscal;

void BM_FrontierSweep(benchmark::State& state)
{
    const auto market = generate_synthetic_market(28, 504, 42);
    const auto moments = estimate_moments(market);
    const auto pp = build_portfolio_problem(moments.mu, moments.sigma, market.esg);
    const auto a = reference_from_point(pp.wrapped, Vector::Constant(28, 1.0 / 28.0));
    SweepOptions options;
    options.n_levels = 8;
    options.n_lambda = 10;
    options.jobs = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(frontier_sweep(pp.wrapped, a, options));
}
BENCHMARK(BM_FrontierSweep)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();

void BM_NondominatedFilter(benchmark::State& state)
{
    const auto count = static_cast<std::size_t>(state.range(0));
    std::vector<Vector> points;
    points.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        const double t = static_cast<double>(i) / static_cast<double>(count);
        points.push_back(Vector{{t, (1.0 - t) * (1.0 - t), static_cast<double>((i * 7919) % 97)}});
    }
    for (auto _ : state) benchmark::DoNotOptimize(nondominated_indices(points));
}
BENCHMARK(BM_NondominatedFilter)->RangeMultiplier(8)->Range(64, 4096);

}  // namespace

BENCHMARK_MAIN();
