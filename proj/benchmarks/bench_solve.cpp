#include "utilscal/portfolio.hpp"
#include "utilscal/slater.hpp"
#include "utilscal/solver.hpp"

#include <benchmark/benchmark.h>

namespace {

using namespace utilscal;

// Synthetic market, equally weighted reference, Slater start from the strict
// subproblems, CD (alpha_base 1) or CES rho = -1/2 (alpha_base 50).
void BM_SolvePortfolio(benchmark::State& state)
{
    const auto n = static_cast<Index>(state.range(0));
    const bool ces = state.range(1) != 0;
    const auto market = generate_synthetic_market(n, 504, 42);
    const auto moments = estimate_moments(market);
    const auto pp = build_portfolio_problem(moments.mu, moments.sigma, market.esg);
    const auto a = reference_from_point(pp.wrapped, Vector::Constant(n, 1.0 / static_cast<double>(n)));
    const auto slater = find_slater(pp.wrapped, a);
    if (!slater.point) {
        state.SkipWithError("no Slater point");
        return;
    }
    const Vector x0 = *slater.point;
    const auto u = ces ? UtilityFunction::ces(Vector::Ones(3), -0.5, 1.0)
                       : UtilityFunction::cobb_douglas(Vector::Constant(3, 1.0 / 3.0));
    const ScalarizedProblem sp(pp.wrapped, a, u);
    SolverConfig cfg;
    cfg.alpha_base = ces ? 50.0 : 1.0;
    int iterations = 0;
    for (auto _ : state) {
        const auto r = solve(sp, x0, cfg);
        iterations = r.iterations;
        benchmark::DoNotOptimize(r.final_h);
    }
    state.counters["iterations"] = iterations;
}
BENCHMARK(BM_SolvePortfolio)->ArgsProduct({{28, 91}, {0, 1}})->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
