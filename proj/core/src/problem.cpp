#include "utilscal/problem.hpp"

#include "utilscal/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace utilscal {

namespace {

void require_dimension(const Vector& x, Index n, const char* what)
{
    if (x.size() != n) {
        std::ostringstream os;
        os << what << ": expected vector of length " << n << ", got " << x.size();
        throw InputError(os.str());
    }
}

}  // namespace

ObjectiveFunction::ObjectiveFunction(std::string name, ValueFn value, GradientFn gradient, Sense sense)
    : name_(std::move(name)), value_(std::move(value)), gradient_(std::move(gradient)), sense_(sense)
{
    if (!value_ || !gradient_) throw InputError("objective '" + name_ + "' needs both value and gradient");
}

double ObjectiveFunction::value(const Vector& x) const
{
    return to_stored(value_(x));
}

Vector ObjectiveFunction::gradient(const Vector& x) const
{
    Vector g = gradient_(x);
    if (sense_ == Sense::Maximize) g = -g;
    return g;
}

FeasibleSet FeasibleSet::box_simplex(Index n)
{
    if (n < 1) throw InputError("box-simplex dimension must be >= 1");
    FeasibleSet s;
    s.kind_ = Kind::BoxSimplex;
    s.n_ = n;
    s.lower_ = Vector::Zero(n);
    s.upper_ = Vector::Ones(n);
    return s;
}

FeasibleSet FeasibleSet::box(Vector lower, Vector upper)
{
    if (lower.size() != upper.size() || lower.size() < 1) throw InputError("box bounds must have equal nonzero length");
    if ((lower.array() > upper.array()).any()) throw InputError("box lower bound exceeds upper bound");
    FeasibleSet s;
    s.kind_ = Kind::Box;
    s.n_ = lower.size();
    s.lower_ = std::move(lower);
    s.upper_ = std::move(upper);
    return s;
}

FeasibleSet FeasibleSet::custom(Index n, MembershipFn membership, ProjectionFn projection,
                                std::shared_ptr<const FeasibleSet> enclosing)
{
    if (!membership || !projection) throw InputError("custom feasible sets need membership and projection");
    if (enclosing && enclosing->dimension() != n) throw InputError("enclosing set dimension mismatch");
    FeasibleSet s;
    s.kind_ = Kind::Custom;
    s.n_ = n;
    s.membership_ = std::move(membership);
    s.projection_ = std::move(projection);
    s.enclosing_ = std::move(enclosing);
    return s;
}

bool FeasibleSet::contains(const Vector& x, double tol) const
{
    if (x.size() != n_) return false;
    if (!x.allFinite()) return false;
    switch (kind_) {
    case Kind::BoxSimplex:
        return std::abs(x.sum() - 1.0) <= tol && (x.array() >= -tol).all() && (x.array() <= 1.0 + tol).all();
    case Kind::Box:
        return (x.array() >= lower_.array() - tol).all() && (x.array() <= upper_.array() + tol).all();
    case Kind::Custom:
        return membership_(x, tol);
    }
    return false;
}

Vector FeasibleSet::project(const Vector& v) const
{
    require_dimension(v, n_, "projection");
    switch (kind_) {
    case Kind::BoxSimplex:
        return project_box_simplex(v);
    case Kind::Box:
        return v.cwiseMax(lower_).cwiseMin(upper_);
    case Kind::Custom:
        return projection_(v);
    }
    return v;
}

Vector FeasibleSet::center() const
{
    switch (kind_) {
    case Kind::BoxSimplex:
        return Vector::Constant(n_, 1.0 / static_cast<double>(n_));
    case Kind::Box:
        return 0.5 * (lower_ + upper_);
    case Kind::Custom:
        return project(enclosing_ ? enclosing_->center() : Vector::Zero(n_));
    }
    return Vector::Zero(n_);
}

MultiObjectiveProblem::MultiObjectiveProblem(std::vector<ObjectiveFunction> objectives, FeasibleSet feasible_set)
    : objectives_(std::move(objectives)), feasible_set_(std::move(feasible_set))
{
    if (objectives_.size() < 2) throw InputError("a multi-objective problem needs at least two objectives");
}

ReferencePoint ReferencePoint::explicit_levels(Vector a)
{
    if (!a.allFinite()) throw InputError("reference levels must be finite");
    return ReferencePoint(std::move(a), Origin::Explicit, std::nullopt);
}

Vector evaluate_objectives(const MultiObjectiveProblem& problem, const Vector& x)
{
    require_dimension(x, problem.dimension(), "evaluate_objectives");
    Vector f(problem.num_objectives());
    for (Index j = 0; j < f.size(); ++j) f[j] = problem.objective(j).value(x);
    return f;
}

Vector to_user_facing(const MultiObjectiveProblem& problem, const Vector& stored)
{
    require_dimension(stored, problem.num_objectives(), "to_user_facing");
    Vector out(stored.size());
    for (Index j = 0; j < out.size(); ++j) out[j] = problem.objective(j).to_user(stored[j]);
    return out;
}

Vector to_stored_form(const MultiObjectiveProblem& problem, const Vector& user)
{
    require_dimension(user, problem.num_objectives(), "to_stored_form");
    Vector out(user.size());
    for (Index j = 0; j < out.size(); ++j) out[j] = problem.objective(j).to_stored(user[j]);
    return out;
}

ReferencePoint reference_from_point(const MultiObjectiveProblem& problem, const Vector& xbar)
{
    require_dimension(xbar, problem.dimension(), "reference_from_point");
    if (!problem.feasible_set().contains(xbar)) throw InputError("reference decision vector is not feasible");
    return ReferencePoint(evaluate_objectives(problem, xbar), ReferencePoint::Origin::FromPoint, xbar);
}

Vector slater_margins(const MultiObjectiveProblem& problem, const ReferencePoint& a, const Vector& x)
{
    if (a.size() != problem.num_objectives()) throw InputError("reference point length differs from objective count");
    return a.levels() - evaluate_objectives(problem, x);
}

bool is_slater_point(const MultiObjectiveProblem& problem, const ReferencePoint& a, const Vector& x, double margin)
{
    if (x.size() != problem.dimension() || !problem.feasible_set().contains(x)) return false;
    return (slater_margins(problem, a, x).array() > margin).all();
}

// x_i = clamp(v_i - theta, 0, 1) with theta chosen so that sum x = 1. The sum
// is nonincreasing and piecewise linear in theta with kinks at v_i and v_i - 1,
// so theta lies between two adjacent kinks and is found by bisection over the
// sorted kinks followed by linear interpolation.
Vector project_box_simplex(const Vector& v)
{
    const Index n = v.size();
    if (n < 1) throw InputError("projection onto the box-simplex needs n >= 1");
    if (n == 1) return Vector::Ones(1);

    auto mass = [&v](double theta) { return (v.array() - theta).cwiseMax(0.0).cwiseMin(1.0).sum(); };

    std::vector<double> kinks;
    kinks.reserve(static_cast<std::size_t>(2 * n));
    for (Index i = 0; i < n; ++i) {
        kinks.push_back(v[i]);
        kinks.push_back(v[i] - 1.0);
    }
    std::sort(kinks.begin(), kinks.end());

    // mass(kinks.front()) = n >= 1 and mass(kinks.back()) = 0 < 1.
    std::size_t lo = 0;
    std::size_t hi = kinks.size() - 1;
    while (hi - lo > 1) {
        const std::size_t mid = lo + (hi - lo) / 2;
        if (mass(kinks[mid]) >= 1.0) lo = mid;
        else hi = mid;
    }
    const double m_lo = mass(kinks[lo]);
    const double m_hi = mass(kinks[hi]);
    double theta = kinks[lo];
    if (m_lo > m_hi) theta = kinks[lo] + (m_lo - 1.0) / (m_lo - m_hi) * (kinks[hi] - kinks[lo]);

    Vector x = (v.array() - theta).cwiseMax(0.0).cwiseMin(1.0);
    return x;
}

}  // namespace utilscal
