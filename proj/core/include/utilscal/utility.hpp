#pragma once

#include "utilscal/extended_real.hpp"
#include "utilscal/problem.hpp"

#include <string>
#include <string_view>

namespace utilscal {

enum class UtilityFamily { CobbDouglas, Leontief, CES };

enum class Monotonicity {
    Monotone,        // u(y + d) >= u(y) for d >= 0
    WeaklyStrict,    // strict for d > 0 componentwise
    Strict,          // strict for d >= 0, d != 0, on the whole domain
    StrictInterior,  // as Strict, restricted to the open orthant
};

enum class Concavity {
    Concave,
    StrictlyConcave,
    StrictlyConcaveInterior,
    PseudoconcaveInterior,
};

/// Properties that gate the solver. Always derived from the parameters by
/// compute_descriptor(); there is no way to construct one by hand.
struct UtilityDescriptor {
    bool is_barrier = false;
    double barrier_level = 0.0;
    Monotonicity monotonicity = Monotonicity::Monotone;
    Concavity concavity = Concavity::Concave;
    bool differentiable_interior = false;
};

/// One of the four utility families on y >= 0. The linear utility is the
/// CES member with rho = kappa = 1.
class UtilityFunction {
public:
    static UtilityFunction cobb_douglas(Vector alpha);
    static UtilityFunction leontief(Vector alpha);
    static UtilityFunction ces(Vector alpha, double rho, double kappa = 1.0);
    static UtilityFunction linear(Vector alpha);

    [[nodiscard]] UtilityFamily family() const { return family_; }
    [[nodiscard]] const Vector& alpha() const { return alpha_; }
    [[nodiscard]] Index size() const { return alpha_.size(); }
    /// CES only.
    [[nodiscard]] double rho() const { return rho_; }
    [[nodiscard]] double kappa() const { return kappa_; }
    [[nodiscard]] bool is_linear() const { return family_ == UtilityFamily::CES && rho_ == 1.0 && kappa_ == 1.0; }

    /// Short label such as "cd", "ces(rho=-0.5,kappa=1)".
    [[nodiscard]] std::string label() const;

private:
    UtilityFunction(UtilityFamily family, Vector alpha, double rho, double kappa);

    UtilityFamily family_;
    Vector alpha_;
    double rho_ = 1.0;
    double kappa_ = 1.0;
};

/// u(y), or -inf when y leaves the nonnegative orthant.
[[nodiscard]] ExtendedReal utility_value(const UtilityFunction& u, const Vector& y);

/// log u(y); -inf whenever u(y) <= 0 or y is outside the domain. Computed in
/// the log domain for CD and CES so tiny margins do not underflow.
[[nodiscard]] ExtendedReal utility_log_value(const UtilityFunction& u, const Vector& y);

/// Analytic gradient on the open orthant. Throws UnsupportedOperation for
/// Leontief and DomainError when some y_j <= 0.
[[nodiscard]] Vector utility_gradient(const UtilityFunction& u, const Vector& y);

[[nodiscard]] UtilityDescriptor compute_descriptor(const UtilityFunction& u);

[[nodiscard]] std::string_view to_string(UtilityFamily f);
[[nodiscard]] std::string_view to_string(Monotonicity m);
[[nodiscard]] std::string_view to_string(Concavity c);

}  // namespace utilscal
