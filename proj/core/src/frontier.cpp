#include "utilscal/pareto.hpp"

#include "projected_descent.hpp"
#include "utilscal/errors.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <functional>
#include <limits>
#include <thread>
#include <tuple>

namespace utilscal {

namespace {

constexpr Index kMaxCornerDimension = 20;

// max of a convex function over K is attained at an extreme point.
double max_over_extreme_points(const ObjectiveFunction& f, const FeasibleSet& set)
{
    const Index n = set.dimension();
    double best = -std::numeric_limits<double>::infinity();
    switch (set.kind()) {
    case FeasibleSet::Kind::BoxSimplex:
        for (Index i = 0; i < n; ++i) best = std::max(best, f.value(Vector::Unit(n, i)));
        return best;
    case FeasibleSet::Kind::Box: {
        if (n > kMaxCornerDimension) throw InputError("box too large for corner enumeration; give a level range");
        const std::uint64_t corners = std::uint64_t{1} << n;
        for (std::uint64_t mask = 0; mask < corners; ++mask) {
            Vector x(n);
            for (Index i = 0; i < n; ++i) x[i] = (mask >> i) & 1U ? set.upper()[i] : set.lower()[i];
            best = std::max(best, f.value(x));
        }
        return best;
    }
    case FeasibleSet::Kind::Custom:
        break;
    }
    throw InputError("level range must be given explicitly for custom feasible sets");
}

std::pair<double, double> stored_level_range(const MultiObjectiveProblem& problem, const SweepOptions& options)
{
    const ObjectiveFunction& last = problem.objective(problem.num_objectives() - 1);
    if (options.level_range) {
        const double a = last.to_stored(options.level_range->first);
        const double b = last.to_stored(options.level_range->second);
        return {std::min(a, b), std::max(a, b)};
    }
    const FeasibleSet& set = problem.feasible_set();
    const auto lo = detail::minimize_projected([&](const Vector& x) { return last.value(x); },
                                               [&](const Vector& x) { return last.gradient(x); }, set, set.center(),
                                               options.max_iterations, options.tolerance);
    return {last.value(lo.x), max_over_extreme_points(last, set)};
}

// Augmented Lagrangian for f_m(x) = level: a multiplier term plus the
// quadratic penalty, whose weight grows by 10x (up to options.penalty) while
// the residual stalls. Plain penalty at the full weight is too
// ill-conditioned for first-order inner solves.
detail::DescentResult equality_penalty_solve(const std::function<double(const Vector&)>& value,
                                             const std::function<Vector(const Vector&)>& gradient,
                                             const ObjectiveFunction& fm, double level, double scale,
                                             const FeasibleSet& set, const Vector& start, double& multiplier,
                                             const SweepOptions& options)
{
    constexpr int kMaxOuter = 60;
    constexpr double kFeasibility = 1e-10;
    double mu = std::min(10.0, options.penalty);
    double previous = std::numeric_limits<double>::infinity();
    detail::DescentResult res;
    res.x = start;
    int budget = options.max_iterations;
    for (int outer = 0; outer < kMaxOuter && budget > 0; ++outer) {
        const double nu = multiplier;
        auto lagrangian = [&](const Vector& x) {
            const double r = (fm.value(x) - level) / scale;
            return value(x) + nu * r + 0.5 * mu * r * r;
        };
        auto lagrangian_gradient = [&](const Vector& x) {
            const double r = (fm.value(x) - level) / scale;
            return Vector(gradient(x) + ((nu + mu * r) / scale) * fm.gradient(x));
        };
        const auto inner = detail::minimize_projected(lagrangian, lagrangian_gradient, set, res.x, budget,
                                                      options.tolerance);
        budget -= std::max(inner.iterations, 1);
        res.x = inner.x;
        res.iterations += inner.iterations;
        const double r = (fm.value(res.x) - level) / scale;
        res.converged = inner.converged && std::abs(r) <= kFeasibility;
        if (res.converged) break;
        multiplier += mu * r;
        if (std::abs(r) > 0.25 * previous) mu = std::min(10.0 * mu, options.penalty);
        previous = std::abs(r);
    }
    return res;
}

double linspace(double lo, double hi, int count, int i)
{
    if (count <= 1) return lo;
    return lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
}

}  // namespace

std::vector<FrontierPoint> frontier_sweep(const MultiObjectiveProblem& problem, const ReferencePoint& a,
                                          const SweepOptions& options)
{
    const Index m = problem.num_objectives();
    if (m != 2 && m != 3) throw InputError("frontier sweep supports two or three objectives");
    if (a.size() != m) throw InputError("reference point length differs from objective count");
    if (options.n_lambda < 1 || options.n_levels < 1) throw InputError("sweep sizes must be positive");

    const bool constrained = m == 3;
    const int n_levels = constrained ? options.n_levels : 1;
    const int n_lambda = options.n_lambda;
    const FeasibleSet& set = problem.feasible_set();
    const ObjectiveFunction& f1 = problem.objective(0);
    const ObjectiveFunction& f2 = problem.objective(1);
    const ObjectiveFunction& fm = problem.objective(m - 1);

    double level_lo = 0.0;
    double level_hi = 0.0;
    if (constrained) std::tie(level_lo, level_hi) = stored_level_range(problem, options);
    const double range = level_hi - level_lo;
    const double scale = range > 0.0 ? range : 1.0;
    // One common factor on the weighted sum leaves lambda's meaning intact
    // and keeps small-valued objectives commensurate with the constraint terms.
    const Vector c = set.center();
    double weight_scale = std::max(f1.gradient(c).lpNorm<Eigen::Infinity>(), f2.gradient(c).lpNorm<Eigen::Infinity>());
    if (!(weight_scale > 0.0) || !std::isfinite(weight_scale)) weight_scale = 1.0;

    std::vector<FrontierPoint> cells(static_cast<std::size_t>(n_levels) * static_cast<std::size_t>(n_lambda));

    auto run_level = [&](int li) {
        const double level = linspace(level_lo, level_hi, n_levels, li);
        Vector warm = set.center();
        double multiplier = 0.0;
        for (int k = 0; k < n_lambda; ++k) {
            const double lambda = linspace(0.0, 1.0, n_lambda, k);
            auto weighted = [&](const Vector& x) {
                return (lambda * f1.value(x) + (1.0 - lambda) * f2.value(x)) / weight_scale;
            };
            auto weighted_gradient = [&](const Vector& x) {
                return Vector((lambda * f1.gradient(x) + (1.0 - lambda) * f2.gradient(x)) / weight_scale);
            };
            detail::DescentResult res;
            if (!constrained) {
                res = detail::minimize_projected(weighted, weighted_gradient, set, warm, options.max_iterations,
                                                 options.tolerance);
            } else {
                res = equality_penalty_solve(weighted, weighted_gradient, fm, level, scale, set, warm, multiplier,
                                             options);
            }
            warm = res.x;
            FrontierPoint& cell = cells[static_cast<std::size_t>(li) * static_cast<std::size_t>(n_lambda) +
                                        static_cast<std::size_t>(k)];
            cell.x = res.x;
            const Vector stored = evaluate_objectives(problem, res.x);
            cell.objectives = to_user_facing(problem, stored);
            cell.level_index = li;
            cell.lambda_index = k;
            cell.converged = res.converged;
            cell.dominates_reference = dominates(stored, a.levels());
            if (constrained) cell.generator = EpsConstraint{level, lambda};
            else cell.generator = WeightedSum{lambda};
        }
    };

    int jobs = options.jobs > 0 ? options.jobs : static_cast<int>(std::max(1U, std::thread::hardware_concurrency()));
    jobs = std::min(jobs, n_levels);
    if (jobs <= 1) {
        for (int li = 0; li < n_levels; ++li) run_level(li);
    } else {
        std::atomic<int> next{0};
        std::vector<std::exception_ptr> failures(static_cast<std::size_t>(jobs));
        {
            std::vector<std::jthread> workers;
            workers.reserve(static_cast<std::size_t>(jobs));
            for (int w = 0; w < jobs; ++w) {
                workers.emplace_back([&, w] {
                    try {
                        for (int li = next.fetch_add(1); li < n_levels; li = next.fetch_add(1)) run_level(li);
                    } catch (...) {
                        failures[static_cast<std::size_t>(w)] = std::current_exception();
                        next.store(n_levels);
                    }
                });
            }
        }
        for (const auto& f : failures) {
            if (f) std::rethrow_exception(f);
        }
    }

    std::vector<Vector> stored_values;
    std::vector<std::size_t> converged_cells;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (!cells[i].converged) continue;
        converged_cells.push_back(i);
        stored_values.push_back(to_stored_form(problem, cells[i].objectives));
    }
    for (std::size_t idx : nondominated_indices(stored_values)) cells[converged_cells[idx]].nondominated = true;
    return cells;
}

}  // namespace utilscal
