#include "utilscal/solver.hpp"

#include "utilscal/errors.hpp"

#include <cmath>
#include <sstream>

namespace utilscal {

namespace {

// Below this relative change, h(x') - h(x) is recomputed by quadrature
// instead of subtracting two rounded values.
constexpr double kDirectDifference = 1e-6;

struct LineSearchOutcome {
    bool accepted = false;
    BacktrackResult result;
    Vector point;
};

// Trial points pass membership within kMembershipTolerance. Left alone, that
// slack accumulates and the next projected direction loses its ascent
// property. Bounds are clamped exactly, which leaves interior coordinates
// untouched; a full re-projection, which perturbs every coordinate by
// rounding, is only used when the simplex sum is off by more than that.
constexpr double kSumTolerance = 1e-14;

Vector snap_to_set(const FeasibleSet& set, Vector x)
{
    switch (set.kind()) {
    case FeasibleSet::Kind::Box:
        return x.cwiseMax(set.lower()).cwiseMin(set.upper());
    case FeasibleSet::Kind::BoxSimplex:
        x = x.cwiseMax(0.0).cwiseMin(1.0);
        if (std::abs(x.sum() - 1.0) > kSumTolerance) x = set.project(x);
        return x;
    case FeasibleSet::Kind::Custom:
        break;
    }
    return x;
}

// grad h . s for s along K. The box-simplex lies in the hyperplane sum x = 1,
// so any multiple of the ones vector can be dropped from the gradient. Taking
// out the mean of g over the coordinates that move (its common value there at
// a stationary point) keeps rounding in sum(s) from swamping small slopes.
double directional_derivative(const FeasibleSet& set, const Vector& g, const Vector& s)
{
    if (set.kind() != FeasibleSet::Kind::BoxSimplex) return g.dot(s);
    double g_sum = 0.0;
    Index moving = 0;
    for (Index i = 0; i < s.size(); ++i) {
        if (s[i] != 0.0) {
            g_sum += g[i];
            ++moving;
        }
    }
    if (moving == 0) return 0.0;
    return g.dot(s) - (g_sum / static_cast<double>(moving)) * s.sum();
}

// h(x + s) - h(x) from the directional derivative by 3-point Gauss-Legendre,
// exact when h restricted to the segment is a polynomial of degree <= 5. Near
// a stationary point the increment is far below one ulp of h, where the plain
// difference is pure rounding noise.
double increment_by_quadrature(const ScalarizedProblem& sp, const Vector& x, const Vector& s)
{
    static const double kOffset = 0.5 * std::sqrt(0.6);
    const double nodes[3] = {0.5 - kOffset, 0.5, 0.5 + kOffset};
    const double weights[3] = {5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0};
    double sum = 0.0;
    const FeasibleSet& set = sp.problem().feasible_set();
    for (int i = 0; i < 3; ++i) sum += weights[i] * directional_derivative(set, h_gradient(sp, x + nodes[i] * s), s);
    return sum;
}

LineSearchOutcome search_step(const ScalarizedProblem& sp, const Vector& x, double h0, double slope,
                              const Vector& d, const SolverConfig& cfg)
{
    const FeasibleSet& set = sp.problem().feasible_set();
    const double floor = sp.descriptor().barrier_level;
    double alpha = cfg.alpha_base;
    for (int j = 0; j <= cfg.max_backtracks; ++j, alpha *= cfg.delta) {
        Vector trial = x + alpha * d;
        if (!set.contains(trial)) continue;
        trial = snap_to_set(set, std::move(trial));
        const ExtendedReal h = h_value(sp, trial);
        if (!h.is_finite()) continue;
        const double hv = h.value();
        if (!(hv > floor)) continue;
        // Margins are concave along the segment, so h is finite on all of it.
        const double gain = std::abs(hv - h0) > kDirectDifference * std::abs(h0)
                                ? hv - h0
                                : increment_by_quadrature(sp, x, trial - x);
        if (gain > 0.0 && gain >= cfg.gamma * alpha * slope) {
            return {true, {alpha, j, hv, gain}, std::move(trial)};
        }
    }
    return {};
}

}  // namespace

void SolverConfig::validate() const
{
    auto fail = [](const char* what) { throw ConfigurationError(what); };
    if (!(gamma > 0.0 && gamma < 1.0)) fail("gamma must lie in (0,1)");
    if (!(delta > 0.0 && delta < 1.0)) fail("delta must lie in (0,1)");
    if (!(alpha_base > 0.0) || !std::isfinite(alpha_base)) fail("alpha_base must be positive");
    if (!(tau > 0.0) || !std::isfinite(tau)) fail("tau must be positive");
    if (!(tol_stationarity > 0.0)) fail("tol_stationarity must be positive");
    if (max_iterations < 0) fail("max_iterations must be nonnegative");
    if (max_backtracks < 0) fail("max_backtracks must be nonnegative");
    if (lipschitz_constant) {
        const double lip = *lipschitz_constant;
        if (!(lip > 0.0)) fail("lipschitz_constant must be positive");
        if (!(alpha_base > 2.0 * (1.0 - gamma) / (tau * lip))) {
            fail("alpha_base must exceed 2 (1 - gamma) / (tau L) when a Lipschitz constant is given");
        }
    }
}

std::string_view to_string(Termination t)
{
    switch (t) {
    case Termination::Stationary: return "stationary";
    case Termination::MaxIterations: return "max_iterations";
    case Termination::LineSearchFailure: return "line_search_failure";
    }
    return "unknown";
}

Vector ascent_direction(const ScalarizedProblem& sp, const Vector& x, double tau)
{
    const Vector g = h_gradient(sp, x);
    return sp.problem().feasible_set().project(x + tau * g) - x;
}

BacktrackResult backtrack(const ScalarizedProblem& sp, const Vector& x, const Vector& d, const SolverConfig& cfg)
{
    const ExtendedReal h0 = h_value(sp, x);
    if (!h0.is_finite() || !(h0.value() > sp.descriptor().barrier_level)) {
        throw DomainError("backtracking needs a Slater point");
    }
    const double slope = directional_derivative(sp.problem().feasible_set(), h_gradient(sp, x), d);
    if (!(slope > 0.0)) throw DomainError("backtracking needs an ascent direction");
    const LineSearchOutcome out = search_step(sp, x, h0.value(), slope, d, cfg);
    if (!out.accepted) {
        std::ostringstream os;
        os << "no acceptable step after " << cfg.max_backtracks << " backtracks";
        throw LineSearchFailure(os.str());
    }
    return out.result;
}

SolveReport solve(const ScalarizedProblem& sp, const Vector& x0, const SolverConfig& cfg)
{
    cfg.validate();
    const UtilityDescriptor& desc = sp.descriptor();
    if (!desc.is_barrier) {
        throw ConfigurationError("barrier required: utility " + sp.utility().label() + " is not a barrier");
    }
    if (!desc.differentiable_interior) {
        throw ConfigurationError("utility " + sp.utility().label() + " is not differentiable on the interior");
    }

    const MultiObjectiveProblem& problem = sp.problem();
    if (x0.size() != problem.dimension()) throw InputError("starting point has the wrong dimension");
    if (!problem.feasible_set().contains(x0)) throw InvalidStart("starting point is not in the feasible set");
    const ExtendedReal h_start = h_value(sp, x0);
    if (!h_start.is_finite() || !(h_start.value() > desc.barrier_level)) {
        throw InvalidStart("starting point must satisfy h(x0) > barrier level (a Slater point)");
    }

    SolveReport report;
    report.initial_x = x0;
    report.initial_h = h_start.value();
    report.initial_objectives = to_user_facing(problem, evaluate_objectives(problem, x0));

    Vector x = x0;
    double h = h_start.value();
    const FeasibleSet& set = problem.feasible_set();
    report.termination = Termination::MaxIterations;

    int k = 0;
    for (;; ++k) {
        const Vector g = h_gradient(sp, x);
        const Vector d = set.project(x + cfg.tau * g) - x;
        const double dnorm = d.norm();
        if (dnorm <= cfg.tol_stationarity * (1.0 + x.norm())) {
            report.termination = Termination::Stationary;
            break;
        }
        const double slope = directional_derivative(set, g, d);
        if (!(slope > 0.0)) {
            // d is not small but rounding has erased its ascent property.
            report.termination = Termination::LineSearchFailure;
            break;
        }
        if (k >= cfg.max_iterations) break;

        const LineSearchOutcome step = search_step(sp, x, h, slope, d, cfg);
        if (!step.accepted) {
            report.termination = Termination::LineSearchFailure;
            break;
        }
        x = step.point;
        h = step.result.h_new;

        IterationRecord rec;
        rec.iteration = k;
        rec.h = h;
        rec.direction_norm = dnorm;
        rec.step = step.result.step;
        rec.backtracks = step.result.backtracks;
        rec.gain = step.result.gain;
        rec.min_margin = slater_margins(problem, sp.reference(), x).minCoeff();
        report.trace.push_back(rec);
    }

    report.iterations = static_cast<int>(report.trace.size());
    report.final_x = x;
    report.final_h = h;
    report.final_objectives = to_user_facing(problem, evaluate_objectives(problem, x));
    report.slater_certificate = slater_margins(problem, sp.reference(), x);
    report.stationarity_residual = (set.project(x + cfg.tau * h_gradient(sp, x)) - x).norm();
    return report;
}

}  // namespace utilscal
