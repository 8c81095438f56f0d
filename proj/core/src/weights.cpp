#include "utilscal/errors.hpp"
#include "utilscal/pareto.hpp"
#include "utilscal/scalarizer.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace utilscal {

namespace {

constexpr double kActiveBound = 1e-12;

// Feasible directions at x that generate the tangent cone of K (exactly for
// the polyhedral kinds, approximately for custom sets), scaled to unit norm.
std::vector<Vector> feasible_directions(const FeasibleSet& set, const Vector& x)
{
    const Index n = set.dimension();
    std::vector<Vector> dirs;
    auto push = [&dirs](Vector d) {
        const double norm = d.norm();
        if (norm > 0.0) dirs.push_back(d / norm);
    };
    switch (set.kind()) {
    case FeasibleSet::Kind::BoxSimplex:
        for (Index i = 0; i < n; ++i) {
            if (x[i] >= 1.0 - kActiveBound) continue;
            for (Index k = 0; k < n; ++k) {
                if (k == i || x[k] <= kActiveBound) continue;
                push(Vector::Unit(n, i) - Vector::Unit(n, k));
            }
        }
        break;
    case FeasibleSet::Kind::Box:
        for (Index i = 0; i < n; ++i) {
            if (x[i] < set.upper()[i] - kActiveBound) push(Vector::Unit(n, i));
            if (x[i] > set.lower()[i] + kActiveBound) push(-Vector::Unit(n, i));
        }
        break;
    case FeasibleSet::Kind::Custom: {
        const double step = 1e-3 * (1.0 + x.norm());
        for (Index i = 0; i < n; ++i) {
            for (double sign : {1.0, -1.0}) {
                const Vector d = set.project(x + sign * step * Vector::Unit(n, i)) - x;
                if (d.norm() > 1e-9 * step) push(d);
            }
            for (Index k = i + 1; k < n; ++k) {
                for (double sign : {1.0, -1.0}) {
                    const Vector e = Vector::Unit(n, i) - Vector::Unit(n, k);
                    const Vector d = set.project(x + sign * step * e) - x;
                    if (d.norm() > 1e-9 * step) push(d);
                }
            }
        }
        break;
    }
    }
    return dirs;
}

// Gradient of the transformed objective phi_j whose weighted sum the
// scalarization minimizes: -log y_j (CD), y_j^rho (CES rho < 0), -y_j^rho
// (CES rho > 0), with y_j = a_j - f_j(x).
Vector transformed_gradient(const ObjectiveFunction& f, double y, SmoothFamily family, const Vector& x)
{
    const Vector g = f.gradient(x);
    if (family.family == UtilityFamily::CobbDouglas) return g / y;
    const double rho = family.rho;
    // d/dx y^rho = -rho y^(rho-1) grad f; negate for rho > 0.
    const double factor = rho < 0.0 ? -rho * std::pow(y, rho - 1.0) : rho * std::pow(y, rho - 1.0);
    return factor * g;
}

UtilityFunction utility_for(SmoothFamily family, Vector alpha)
{
    if (family.family == UtilityFamily::CobbDouglas) return UtilityFunction::cobb_douglas(std::move(alpha));
    return UtilityFunction::ces(std::move(alpha), family.rho, 1.0);
}

}  // namespace

Vector recover_weights_min(const MultiObjectiveProblem& problem, const ReferencePoint& a, const Vector& x_hat)
{
    if (x_hat.size() != problem.dimension()) throw InputError("point has the wrong dimension");
    if (!problem.feasible_set().contains(x_hat)) throw InputError("point is not in the feasible set");
    const Vector margins = slater_margins(problem, a, x_hat);
    if ((margins.array() < -kMembershipTolerance).any()) {
        throw InputError("point violates the reference constraints");
    }
    Vector alpha = Vector::Zero(margins.size());
    bool any = false;
    for (Index j = 0; j < margins.size(); ++j) {
        if (margins[j] > 0.0) {
            alpha[j] = 1.0 / margins[j];
            any = true;
        }
    }
    if (!any) throw DomainError("no slack constraint at the point: the Slater condition fails there");
    return alpha;
}

Vector recover_weights_smooth(const MultiObjectiveProblem& problem, const ReferencePoint& a, const Vector& x_hat,
                              SmoothFamily family, const RecoveryOptions& options)
{
    if (family.family == UtilityFamily::Leontief) throw UnsupportedOperation("use recover_weights_min for Leontief");
    if (family.family == UtilityFamily::CES && (family.rho == 0.0 || family.rho > 1.0)) {
        throw InputError("CES recovery needs rho <= 1, rho != 0");
    }
    if (x_hat.size() != problem.dimension()) throw InputError("point has the wrong dimension");
    if (!problem.feasible_set().contains(x_hat)) throw InputError("point is not in the feasible set");

    const Index m = problem.num_objectives();
    const Vector y = slater_margins(problem, a, x_hat);
    const bool linear = family.family == UtilityFamily::CES && family.rho == 1.0;
    if (linear ? (y.array() < 0.0).any() : !(y.array() > 0.0).all()) {
        throw DomainError("weight recovery requires a Slater point (a feasible one for the linear utility)");
    }

    // Columns: unit-normalized transformed gradients.
    std::vector<Vector> columns;
    Vector norms(m);
    for (Index j = 0; j < m; ++j) {
        Vector c = transformed_gradient(problem.objective(j), y[j], family, x_hat);
        norms[j] = c.norm();
        columns.push_back(norms[j] > 0.0 ? Vector(c / norms[j]) : c);
    }

    const std::vector<Vector> dirs = feasible_directions(problem.feasible_set(), x_hat);
    Matrix gram(static_cast<Index>(dirs.size()), m);
    for (std::size_t s = 0; s < dirs.size(); ++s) {
        for (Index j = 0; j < m; ++j) gram(static_cast<Index>(s), j) = columns[static_cast<std::size_t>(j)].dot(dirs[s]);
    }

    // Minimize sum_s min(0, (G lambda)_s)^2 over the probability simplex:
    // x_hat is stationary for sum_j lambda_j phi_j iff every feasible
    // direction is non-descending.
    Vector lambda = Vector::Constant(m, 1.0 / static_cast<double>(m));
    auto violation = [&gram](const Vector& l) { return (gram * l).cwiseMin(0.0).eval(); };
    double worst = 0.0;
    if (gram.rows() > 0) {
        const double sigma = Eigen::JacobiSVD<Matrix>(gram).singularValues()(0);
        const double step = sigma > 0.0 ? 0.5 / (sigma * sigma) : 1.0;
        for (int it = 0; it < options.max_iterations; ++it) {
            const Vector v = violation(lambda);
            if (v.squaredNorm() < 1e-32) break;
            const Vector next = project_box_simplex(lambda - step * 2.0 * gram.transpose() * v);
            if ((next - lambda).lpNorm<Eigen::Infinity>() < 1e-16) {
                lambda = next;
                break;
            }
            lambda = next;
        }
        worst = -violation(lambda).minCoeff();
    }
    if (worst > options.residual_tolerance) {
        std::ostringstream os;
        os << "no weights make the point stationary (residual " << worst << ")";
        throw RecoveryFailed(os.str());
    }

    Vector alpha = Vector::Zero(m);
    for (Index j = 0; j < m; ++j) {
        if (norms[j] > 0.0) alpha[j] = lambda[j] / norms[j];
        else alpha[j] = lambda[j];
    }
    if (!(alpha.sum() > 0.0)) throw RecoveryFailed("recovered weights vanish");
    alpha /= alpha.sum();

    if (options.verification_resolution > 0 && problem.dimension() <= 3) {
        const UtilityFunction u = utility_for(family, alpha);
        ScalarizedProblem sp(problem, a, u);
        const ExtendedReal at_hat = h_value(sp, x_hat);
        for (const Vector& x : enumerate_grid(problem.feasible_set(), options.verification_resolution)) {
            const ExtendedReal hx = h_value(sp, x);
            if (hx.is_finite() && hx.value() > at_hat.value() + options.verification_tolerance) {
                std::ostringstream os;
                os << "grid point beats the candidate under the recovered weights (" << hx.value() << " > "
                   << at_hat.value() << ")";
                throw RecoveryFailed(os.str());
            }
        }
    }
    return alpha;
}

CompromiseResult compromise_comparison(const MultiObjectiveProblem& problem, const ReferencePoint& a,
                                       const Vector& alpha, double p, int resolution,
                                       const CompromiseTransform& transform)
{
    if (!(p >= 1.0)) throw InputError("compromise programming needs p >= 1");
    const Index m = problem.num_objectives();
    if (alpha.size() != m || a.size() != m) throw InputError("weight / reference length mismatch");

    const UtilityFunction u = UtilityFunction::ces(alpha, -p, 1.0);
    std::vector<double> utility;
    std::vector<double> distance;
    for (const Vector& x : enumerate_grid(problem.feasible_set(), resolution)) {
        const Vector y = slater_margins(problem, a, x);
        if (!(y.array() > 0.0).all()) continue;
        utility.push_back(utility_value(u, y).value());
        double sum = 0.0;
        for (Index j = 0; j < m; ++j) {
            const double g = transform ? transform(j, y[j]) : 1.0 / y[j];
            sum += alpha[j] * std::pow(g, p);
        }
        distance.push_back(std::pow(sum, 1.0 / p));
    }
    if (utility.empty()) throw InputError("no Slater point on the grid");

    CompromiseResult out;
    out.slater_points = utility.size();
    const double best_u = *std::max_element(utility.begin(), utility.end());
    const double best_d = *std::min_element(distance.begin(), distance.end());
    constexpr double kTie = 1e-12;
    for (std::size_t i = 0; i < utility.size(); ++i) {
        if (utility[i] >= best_u - kTie * std::abs(best_u)) out.utility_argmax.push_back(i);
        if (distance[i] <= best_d + kTie * std::abs(best_d)) out.compromise_argmin.push_back(i);
    }
    std::vector<std::size_t> common;
    std::set_intersection(out.utility_argmax.begin(), out.utility_argmax.end(), out.compromise_argmin.begin(),
                          out.compromise_argmin.end(), std::back_inserter(common));
    out.coincide = !common.empty();
    return out;
}

bool compromise_equivalence_check(const MultiObjectiveProblem& problem, const ReferencePoint& a, const Vector& alpha,
                                  double p, int resolution)
{
    return compromise_comparison(problem, a, alpha, p, resolution).coincide;
}

}  // namespace utilscal
