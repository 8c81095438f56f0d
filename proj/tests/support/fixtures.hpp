#pragma once

#include "utilscal/problem.hpp"

namespace fixture {

using utilscal::Vector;

// f = (x^2, (x - 1)^2) on [0, 1].
inline utilscal::MultiObjectiveProblem segment_toy()
{
    std::vector<utilscal::ObjectiveFunction> f;
    f.emplace_back(
        "f1", [](const Vector& x) { return x[0] * x[0]; }, [](const Vector& x) { return Vector::Constant(1, 2 * x[0]); });
    f.emplace_back(
        "f2", [](const Vector& x) { return (x[0] - 1) * (x[0] - 1); },
        [](const Vector& x) { return Vector::Constant(1, 2 * (x[0] - 1)); });
    return {std::move(f), utilscal::FeasibleSet::box(Vector::Zero(1), Vector::Ones(1))};
}

// f1 = (x1 - .3)^2 + x2, f2 = (x1 - .7)^2 + x2, f3 = x2 on [0, 1]^2. Any
// reference with a3 = 0 keeps the third constraint active on all of F.
inline utilscal::MultiObjectiveProblem weak_toy()
{
    std::vector<utilscal::ObjectiveFunction> f;
    for (double c : {0.3, 0.7}) {
        f.emplace_back(
            c < 0.5 ? "f1" : "f2", [c](const Vector& x) { return (x[0] - c) * (x[0] - c) + x[1]; },
            [c](const Vector& x) { return Vector{{2 * (x[0] - c), 1.0}}; });
    }
    f.emplace_back(
        "f3", [](const Vector& x) { return x[1]; }, [](const Vector&) { return Vector{{0.0, 1.0}}; });
    return {std::move(f), utilscal::FeasibleSet::box(Vector::Zero(2), Vector::Ones(2))};
}

}  // namespace fixture
