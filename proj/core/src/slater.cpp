#include "utilscal/slater.hpp"

#include "utilscal/errors.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <sstream>

namespace utilscal {

namespace {

constexpr double kStrictMargin = 1e-12;
constexpr double kReducedResidual = 1e-10;
constexpr int kReducedMaxSweeps = 1000;

// Penalty continuation: inward shift (relative to each objective's scale)
// times penalty weight.
constexpr double kShifts[] = {1e-2, 1e-4, 1e-6};
constexpr double kPenaltyStart = 1.0;
constexpr double kPenaltyEnd = 1e6;

bool meets_postcondition(const MultiObjectiveProblem& problem, const Vector& a, Index j, const Vector& x)
{
    if (!problem.feasible_set().contains(x)) return false;
    const Vector f = evaluate_objectives(problem, x);
    for (Index i = 0; i < f.size(); ++i) {
        if (!(f[i] <= a[i])) return false;
    }
    return f[j] < a[j] - kStrictMargin;
}

// Phi(x) = f_j / s_j + rho * sum_{i != j} max(0, (f_i - a_i + shift_i) / s_i)^2
class PenaltyMerit {
public:
    PenaltyMerit(const MultiObjectiveProblem& problem, const Vector& a, Index j, Vector scale)
        : problem_(problem), a_(a), j_(j), scale_(std::move(scale)) {}

    void set(double rho, double shift)
    {
        rho_ = rho;
        shift_ = shift;
    }

    double value(const Vector& x) const
    {
        double phi = problem_.objective(j_).value(x) / scale_[j_];
        for (Index i = 0; i < a_.size(); ++i) {
            if (i == j_) continue;
            const double r = residual(i, x);
            if (r > 0.0) phi += rho_ * r * r;
        }
        return phi;
    }

    Vector gradient(const Vector& x) const
    {
        Vector g = problem_.objective(j_).gradient(x) / scale_[j_];
        for (Index i = 0; i < a_.size(); ++i) {
            if (i == j_) continue;
            const double r = residual(i, x);
            if (r > 0.0) g += (2.0 * rho_ * r / scale_[i]) * problem_.objective(i).gradient(x);
        }
        return g;
    }

private:
    double residual(Index i, const Vector& x) const
    {
        return (problem_.objective(i).value(x) - a_[i]) / scale_[i] + shift_;
    }

    const MultiObjectiveProblem& problem_;
    const Vector& a_;
    Index j_;
    Vector scale_;
    double rho_ = 1.0;
    double shift_ = 0.0;
};

void require_in_f(const MultiObjectiveProblem& problem, const ReferencePoint& a, const Vector& start)
{
    if (start.size() != problem.dimension()) throw InputError("Slater search start has the wrong dimension");
    if (!problem.feasible_set().contains(start)) throw InputError("Slater search start is not in K");
    const Vector margins = slater_margins(problem, a, start);
    if ((margins.array() < -kMembershipTolerance).any()) {
        throw InputError("Slater search start violates the reference constraints");
    }
}

const Vector& origin_of(const ReferencePoint& a)
{
    if (!a.origin_point()) throw InputError("no feasible start: the reference point was not computed from a decision vector");
    return *a.origin_point();
}

}  // namespace

std::string_view to_string(SlaterKind k)
{
    switch (k) {
    case SlaterKind::SlaterPoint: return "slater_point";
    case SlaterKind::WeakParetoRegion: return "weak_pareto_region";
    case SlaterKind::ParetoRegion: return "pareto_region";
    }
    return "unknown";
}

std::optional<Vector> strict_subproblem(const MultiObjectiveProblem& problem, const ReferencePoint& a, Index j,
                                        const Vector& start, int budget)
{
    const Index m = problem.num_objectives();
    if (j < 0 || j >= m) throw InputError("objective index out of range");
    if (a.size() != m) throw InputError("reference point length differs from objective count");
    require_in_f(problem, a, start);

    const Vector& levels = a.levels();
    if (meets_postcondition(problem, levels, j, start)) return start;

    Vector scale(m);
    for (Index i = 0; i < m; ++i) {
        const double s = std::max(std::abs(levels[i]), problem.objective(i).gradient(start).norm());
        scale[i] = s > 0.0 && std::isfinite(s) ? s : 1.0;
    }

    PenaltyMerit merit(problem, levels, j, scale);
    const FeasibleSet& set = problem.feasible_set();

    int stages = 0;
    for (double rho = kPenaltyStart; rho <= kPenaltyEnd; rho *= 10.0) ++stages;
    stages *= static_cast<int>(std::size(kShifts));
    const int per_stage = std::max(20, (budget + stages - 1) / std::max(stages, 1));

    int used = 0;
    Vector x = start;
    for (double shift : kShifts) {
        for (double rho = kPenaltyStart; rho <= kPenaltyEnd && used < budget; rho *= 10.0) {
            merit.set(rho, shift);
            double step = 1.0;
            for (int it = 0; it < per_stage && used < budget; ++it, ++used) {
                const double phi = merit.value(x);
                const Vector g = merit.gradient(x);
                Vector next;
                bool moved = false;
                for (int bt = 0; bt < 60; ++bt, step *= 0.5) {
                    next = set.project(x - step * g);
                    const Vector dx = next - x;
                    if (dx.squaredNorm() == 0.0) break;
                    if (merit.value(next) <= phi + 1e-4 * g.dot(dx)) {
                        moved = true;
                        break;
                    }
                }
                if (!moved) break;
                const double change = (next - x).norm();
                x = next;
                step *= 2.0;
                if (meets_postcondition(problem, levels, j, x)) return x;
                if (change <= 1e-15 * (1.0 + x.norm())) break;
            }
        }
    }
    return std::nullopt;
}

std::optional<Vector> strict_subproblem(const MultiObjectiveProblem& problem, const ReferencePoint& a, Index j,
                                        int budget)
{
    return strict_subproblem(problem, a, j, origin_of(a), budget);
}

SlaterOutcome find_slater(const MultiObjectiveProblem& problem, const ReferencePoint& a, const Vector& start,
                          int budget)
{
    const Index m = problem.num_objectives();
    SlaterOutcome out;
    out.witnesses.resize(static_cast<std::size_t>(m));
    for (Index j = 0; j < m; ++j) {
        auto w = strict_subproblem(problem, a, j, start, budget);
        if (w) out.witnesses[static_cast<std::size_t>(j)] = std::move(w);
        else out.pinned.push_back(j);
    }

    if (out.pinned.empty()) {
        Vector avg = Vector::Zero(problem.dimension());
        for (const auto& w : out.witnesses) avg += *w;
        avg /= static_cast<double>(m);
        if (!is_slater_point(problem, a, avg)) {
            throw Error("averaged witness point failed the Slater check");
        }
        out.kind = SlaterKind::SlaterPoint;
        out.point = std::move(avg);
    } else if (static_cast<Index>(out.pinned.size()) == m) {
        out.kind = SlaterKind::ParetoRegion;
    } else {
        out.kind = SlaterKind::WeakParetoRegion;
    }
    return out;
}

SlaterOutcome find_slater(const MultiObjectiveProblem& problem, const ReferencePoint& a, int budget)
{
    return find_slater(problem, a, origin_of(a), budget);
}

ReducedProblem reduce_problem(const MultiObjectiveProblem& problem, const ReferencePoint& a,
                              const std::vector<Index>& pinned)
{
    const Index m = problem.num_objectives();
    if (a.size() != m) throw InputError("reference point length differs from objective count");
    std::vector<bool> is_pinned(static_cast<std::size_t>(m), false);
    for (Index j : pinned) {
        if (j < 0 || j >= m) throw InputError("pinned index out of range");
        is_pinned[static_cast<std::size_t>(j)] = true;
    }
    const auto pinned_count = std::count(is_pinned.begin(), is_pinned.end(), true);
    if (pinned_count == 0) throw InputError("nothing to reduce: no pinned objectives");
    if (pinned_count == m) throw InputError("every objective is pinned; the whole constraint set is Pareto optimal");

    std::vector<ObjectiveFunction> kept_objectives;
    std::vector<ObjectiveFunction> folded;
    std::vector<double> folded_levels;
    std::vector<Index> kept;
    for (Index j = 0; j < m; ++j) {
        if (is_pinned[static_cast<std::size_t>(j)]) {
            folded.push_back(problem.objective(j));
            folded_levels.push_back(a.levels()[j]);
        } else {
            kept_objectives.push_back(problem.objective(j));
            kept.push_back(j);
        }
    }

    auto base = std::make_shared<const FeasibleSet>(problem.feasible_set());
    auto membership = [base, folded, folded_levels](const Vector& x, double tol) {
        if (!base->contains(x, tol)) return false;
        for (std::size_t i = 0; i < folded.size(); ++i) {
            if (folded[i].value(x) > folded_levels[i] + tol) return false;
        }
        return true;
    };
    auto projection = [base, folded, folded_levels](const Vector& v) {
        Vector y = v;
        for (int sweep = 0; sweep < kReducedMaxSweeps; ++sweep) {
            y = base->project(y);
            double worst = 0.0;
            Vector shifted = y;
            for (std::size_t i = 0; i < folded.size(); ++i) {
                const double r = folded[i].value(shifted) - folded_levels[i];
                if (r <= kReducedResidual) continue;
                worst = std::max(worst, r);
                const Vector g = folded[i].gradient(shifted);
                const double gg = g.squaredNorm();
                if (gg > 0.0) shifted -= (r / gg) * g;
            }
            if (worst <= kReducedResidual) return y;
            y = shifted;
        }
        return base->project(y);
    };

    FeasibleSet reduced_set = FeasibleSet::custom(problem.dimension(), membership, projection, base);
    MultiObjectiveProblem reduced(std::move(kept_objectives), std::move(reduced_set));

    Vector levels(static_cast<Index>(kept.size()));
    for (std::size_t i = 0; i < kept.size(); ++i) levels[static_cast<Index>(i)] = a.levels()[kept[i]];

    const auto& origin = a.origin_point();
    if (origin && reduced.feasible_set().contains(*origin)) {
        ReferencePoint ref = reference_from_point(reduced, *origin);
        if ((ref.levels() - levels).cwiseAbs().maxCoeff() == 0.0) {
            return ReducedProblem{std::move(reduced), std::move(ref), std::move(kept)};
        }
    }
    return ReducedProblem{std::move(reduced), ReferencePoint::explicit_levels(std::move(levels)), std::move(kept)};
}

}  // namespace utilscal
