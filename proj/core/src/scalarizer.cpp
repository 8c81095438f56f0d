#include "utilscal/scalarizer.hpp"

#include "utilscal/errors.hpp"

#include <sstream>

namespace utilscal {

ScalarizedProblem::ScalarizedProblem(MultiObjectiveProblem problem, ReferencePoint reference, UtilityFunction utility)
    : problem_(std::move(problem)),
      reference_(std::move(reference)),
      utility_(std::move(utility)),
      descriptor_(compute_descriptor(utility_))
{
    const Index m = problem_.num_objectives();
    if (reference_.size() != m || utility_.size() != m) {
        std::ostringstream os;
        os << "dimension mismatch: " << m << " objectives, " << reference_.size() << " reference levels, "
           << utility_.size() << " utility weights";
        throw InputError(os.str());
    }
}

Vector ScalarizedProblem::benefits(const Vector& x) const
{
    Vector y = reference_.levels() - evaluate_objectives(problem_, x);
    for (Index j = 0; j < y.size(); ++j) {
        if (y[j] >= 0.0 && y[j] < kBoundaryFloor) y[j] = 0.0;
    }
    return y;
}

ExtendedReal h_value(const ScalarizedProblem& sp, const Vector& x)
{
    return utility_value(sp.utility(), sp.benefits(x));
}

ExtendedReal log_h_value(const ScalarizedProblem& sp, const Vector& x)
{
    return utility_log_value(sp.utility(), sp.benefits(x));
}

Vector h_gradient(const ScalarizedProblem& sp, const Vector& x)
{
    if (sp.utility().family() == UtilityFamily::Leontief) {
        throw UnsupportedOperation("h is not differentiable for the Leontief utility");
    }
    const Vector y = sp.benefits(x);
    if (!(y.array() > 0.0).all()) throw DomainError("h gradient requested at a point that is not Slater");

    const Vector du = utility_gradient(sp.utility(), y);
    Vector g = Vector::Zero(x.size());
    const auto& objectives = sp.problem().objectives();
    for (std::size_t j = 0; j < objectives.size(); ++j) {
        const double w = du[static_cast<Index>(j)];
        if (w == 0.0) continue;
        g.noalias() -= w * objectives[j].gradient(x);
    }
    return g;
}

}  // namespace utilscal
