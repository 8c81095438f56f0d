#pragma once

#include "utilscal/extended_real.hpp"
#include "utilscal/problem.hpp"
#include "utilscal/utility.hpp"

namespace utilscal {

/// Benefit components a_j - f_j(x) below this are treated as exactly zero.
inline constexpr double kBoundaryFloor = 1e-300;

/// h(x) = u(a - f(x)) over K. Immutable; safe to evaluate concurrently.
class ScalarizedProblem {
public:
    ScalarizedProblem(MultiObjectiveProblem problem, ReferencePoint reference, UtilityFunction utility);

    [[nodiscard]] const MultiObjectiveProblem& problem() const { return problem_; }
    [[nodiscard]] const ReferencePoint& reference() const { return reference_; }
    [[nodiscard]] const UtilityFunction& utility() const { return utility_; }
    [[nodiscard]] const UtilityDescriptor& descriptor() const { return descriptor_; }

    /// a - f(x) with the boundary floor applied.
    [[nodiscard]] Vector benefits(const Vector& x) const;

private:
    MultiObjectiveProblem problem_;
    ReferencePoint reference_;
    UtilityFunction utility_;
    UtilityDescriptor descriptor_;
};

/// u(a - f(x)); -inf iff some f_j(x) > a_j.
[[nodiscard]] ExtendedReal h_value(const ScalarizedProblem& sp, const Vector& x);

/// -sum_j du/dy_j(a - f(x)) grad f_j(x). Requires a Slater point.
[[nodiscard]] Vector h_gradient(const ScalarizedProblem& sp, const Vector& x);

/// log h(x), -inf when h(x) <= 0. Reporting only.
[[nodiscard]] ExtendedReal log_h_value(const ScalarizedProblem& sp, const Vector& x);

}  // namespace utilscal
