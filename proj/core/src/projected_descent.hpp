#pragma once

#include "utilscal/problem.hpp"

#include <functional>

namespace utilscal::detail {

struct DescentResult {
    Vector x;
    int iterations = 0;
    bool converged = false;
};

// Spectral projected gradient with a nonmonotone Armijo backtracking, used for
// the smooth convex subproblems of the frontier sweep and the level range.
// Stops when |P(x - grad) - x| <= tol (1 + |x|).
DescentResult minimize_projected(const std::function<double(const Vector&)>& value,
                                 const std::function<Vector(const Vector&)>& gradient, const FeasibleSet& set,
                                 const Vector& start, int max_iterations, double tol);

}  // namespace utilscal::detail
