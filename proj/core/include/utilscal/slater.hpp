#pragma once

#include "utilscal/problem.hpp"

#include <optional>
#include <string_view>
#include <vector>

namespace utilscal {

/// Default number of projected-gradient iterations granted to each strict
/// subproblem.
inline constexpr int kDefaultSlaterBudget = 2000;

enum class SlaterKind {
    SlaterPoint,       // no constraint is pinned; `point` is strictly feasible
    WeakParetoRegion,  // some but not all constraints pinned; F is weakly efficient
    ParetoRegion,      // every constraint pinned; F is efficient
};

[[nodiscard]] std::string_view to_string(SlaterKind k);

struct SlaterOutcome {
    SlaterKind kind = SlaterKind::ParetoRegion;
    std::optional<Vector> point;
    /// 0-based indices j for which no x in F with f_j(x) < a_j was found.
    std::vector<Index> pinned;
    /// Witness x^j per objective; empty for pinned indices.
    std::vector<std::optional<Vector>> witnesses;
};

/// Looks for x in F = {x in K : f <= a} with f_j(x) < a_j, starting from
/// `start` (which must lie in F). Returned points satisfy f_i(x) <= a_i
/// exactly for every i and f_j(x) < a_j - 1e-12. Returns nullopt when the
/// budget runs out.
[[nodiscard]] std::optional<Vector> strict_subproblem(const MultiObjectiveProblem& problem, const ReferencePoint& a,
                                                      Index j, const Vector& start,
                                                      int budget = kDefaultSlaterBudget);

/// Same, starting from the point the reference was computed from. Throws
/// InputError when the reference carries no origin point.
[[nodiscard]] std::optional<Vector> strict_subproblem(const MultiObjectiveProblem& problem, const ReferencePoint& a,
                                                      Index j, int budget = kDefaultSlaterBudget);

/// Runs the strict subproblem for every objective, averages the witnesses
/// when none is pinned, and classifies F.
[[nodiscard]] SlaterOutcome find_slater(const MultiObjectiveProblem& problem, const ReferencePoint& a,
                                        const Vector& start, int budget = kDefaultSlaterBudget);
[[nodiscard]] SlaterOutcome find_slater(const MultiObjectiveProblem& problem, const ReferencePoint& a,
                                        int budget = kDefaultSlaterBudget);

struct ReducedProblem {
    MultiObjectiveProblem problem;
    ReferencePoint reference;
    /// Original indices of the objectives that were kept.
    std::vector<Index> kept;
};

/// Drops the pinned objectives and folds their constraints f_j <= a_j into
/// the feasible set. The new set's projection alternates between K and
/// halfspace linearizations of the violated constraints until the residual
/// falls below 1e-10, so it is approximate for nonlinear pinned objectives.
[[nodiscard]] ReducedProblem reduce_problem(const MultiObjectiveProblem& problem, const ReferencePoint& a,
                                            const std::vector<Index>& pinned);

}  // namespace utilscal
