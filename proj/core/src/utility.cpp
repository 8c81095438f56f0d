#include "utilscal/utility.hpp"

#include "utilscal/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace utilscal {

namespace {

constexpr double kSumTolerance = 1e-12;

void validate_alpha(const Vector& alpha)
{
    if (alpha.size() < 1) throw InputError("utility weights must not be empty");
    if (!alpha.allFinite()) throw InputError("utility weights must be finite");
    if ((alpha.array() < 0.0).any()) throw InputError("utility weights must be nonnegative");
    if (!(alpha.array() > 0.0).any()) throw InputError("at least one utility weight must be positive");
}

bool all_positive(const Vector& alpha) { return (alpha.array() > 0.0).all(); }

void require_length(const UtilityFunction& u, const Vector& y)
{
    if (y.size() != u.size()) {
        std::ostringstream os;
        os << "utility expects " << u.size() << " arguments, got " << y.size();
        throw InputError(os.str());
    }
}

bool outside_domain(const Vector& y) { return !(y.array() >= 0.0).all(); }

// Sum of alpha_j * y_j^rho over the positive weights. For rho < 0 a zero
// argument contributes +inf, which the caller turns into u = 0.
double ces_sum(const UtilityFunction& u, const Vector& y)
{
    double s = 0.0;
    for (Index j = 0; j < y.size(); ++j) {
        const double a = u.alpha()[j];
        if (a == 0.0) continue;
        if (y[j] == 0.0) {
            if (u.rho() < 0.0) return std::numeric_limits<double>::infinity();
            continue;
        }
        s += a * std::pow(y[j], u.rho());
    }
    return s;
}

double ces_value(const UtilityFunction& u, const Vector& y)
{
    const double s = ces_sum(u, y);
    if (u.rho() < 0.0) {
        // 1/inf = 0 convention.
        if (std::isinf(s)) return 0.0;
    }
    if (s == 0.0) return 0.0;
    return std::pow(s, u.kappa() / u.rho());
}

}  // namespace

UtilityFunction::UtilityFunction(UtilityFamily family, Vector alpha, double rho, double kappa)
    : family_(family), alpha_(std::move(alpha)), rho_(rho), kappa_(kappa)
{
    validate_alpha(alpha_);
    if (family_ == UtilityFamily::CES) {
        if (!std::isfinite(rho_) || rho_ > 1.0 || rho_ == 0.0) throw InputError("CES requires rho <= 1 and rho != 0");
        if (!std::isfinite(kappa_) || kappa_ <= 0.0 || kappa_ > 1.0) throw InputError("CES requires 0 < kappa <= 1");
    }
}

UtilityFunction UtilityFunction::cobb_douglas(Vector alpha)
{
    return UtilityFunction(UtilityFamily::CobbDouglas, std::move(alpha), 1.0, 1.0);
}

UtilityFunction UtilityFunction::leontief(Vector alpha)
{
    return UtilityFunction(UtilityFamily::Leontief, std::move(alpha), 1.0, 1.0);
}

UtilityFunction UtilityFunction::ces(Vector alpha, double rho, double kappa)
{
    return UtilityFunction(UtilityFamily::CES, std::move(alpha), rho, kappa);
}

UtilityFunction UtilityFunction::linear(Vector alpha)
{
    return UtilityFunction(UtilityFamily::CES, std::move(alpha), 1.0, 1.0);
}

std::string UtilityFunction::label() const
{
    std::ostringstream os;
    switch (family_) {
    case UtilityFamily::CobbDouglas: os << "cd"; break;
    case UtilityFamily::Leontief: os << "min"; break;
    case UtilityFamily::CES:
        if (is_linear()) os << "linear";
        else os << "ces(rho=" << rho_ << ",kappa=" << kappa_ << ")";
        break;
    }
    return os.str();
}

ExtendedReal utility_value(const UtilityFunction& u, const Vector& y)
{
    require_length(u, y);
    if (outside_domain(y)) return ExtendedReal::negative_infinity();

    switch (u.family()) {
    case UtilityFamily::CobbDouglas: {
        double log_sum = 0.0;
        for (Index j = 0; j < y.size(); ++j) {
            const double a = u.alpha()[j];
            if (a == 0.0) continue;
            if (y[j] == 0.0) return ExtendedReal(0.0);
            log_sum += a * std::log(y[j]);
        }
        return ExtendedReal(std::exp(log_sum));
    }
    case UtilityFamily::Leontief:
        return ExtendedReal((u.alpha().array() * y.array()).minCoeff());
    case UtilityFamily::CES:
        return ExtendedReal(ces_value(u, y));
    }
    return ExtendedReal::negative_infinity();
}

ExtendedReal utility_log_value(const UtilityFunction& u, const Vector& y)
{
    require_length(u, y);
    if (outside_domain(y)) return ExtendedReal::negative_infinity();

    switch (u.family()) {
    case UtilityFamily::CobbDouglas: {
        double log_sum = 0.0;
        for (Index j = 0; j < y.size(); ++j) {
            const double a = u.alpha()[j];
            if (a == 0.0) continue;
            if (y[j] == 0.0) return ExtendedReal::negative_infinity();
            log_sum += a * std::log(y[j]);
        }
        return ExtendedReal(log_sum);
    }
    case UtilityFamily::Leontief: {
        const double v = (u.alpha().array() * y.array()).minCoeff();
        if (v <= 0.0) return ExtendedReal::negative_infinity();
        return ExtendedReal(std::log(v));
    }
    case UtilityFamily::CES: {
        // log S by log-sum-exp over the positive weights.
        double peak = -std::numeric_limits<double>::infinity();
        for (Index j = 0; j < y.size(); ++j) {
            const double a = u.alpha()[j];
            if (a == 0.0) continue;
            if (y[j] == 0.0) {
                if (u.rho() < 0.0) return ExtendedReal::negative_infinity();
                continue;
            }
            peak = std::max(peak, std::log(a) + u.rho() * std::log(y[j]));
        }
        if (!std::isfinite(peak)) return ExtendedReal::negative_infinity();
        double acc = 0.0;
        for (Index j = 0; j < y.size(); ++j) {
            const double a = u.alpha()[j];
            if (a == 0.0 || y[j] == 0.0) continue;
            acc += std::exp(std::log(a) + u.rho() * std::log(y[j]) - peak);
        }
        return ExtendedReal(u.kappa() / u.rho() * (peak + std::log(acc)));
    }
    }
    return ExtendedReal::negative_infinity();
}

Vector utility_gradient(const UtilityFunction& u, const Vector& y)
{
    require_length(u, y);
    if (u.family() == UtilityFamily::Leontief) throw UnsupportedOperation("the Leontief utility is not differentiable");
    if (!(y.array() > 0.0).all()) throw DomainError("utility gradient requires a strictly positive argument");

    Vector g = Vector::Zero(y.size());
    if (u.family() == UtilityFamily::CobbDouglas) {
        const double value = utility_value(u, y).value();
        for (Index j = 0; j < y.size(); ++j) g[j] = value * u.alpha()[j] / y[j];
        return g;
    }

    const double s = ces_sum(u, y);
    const double scale = u.kappa() * std::pow(s, u.kappa() / u.rho() - 1.0);
    for (Index j = 0; j < y.size(); ++j) {
        const double a = u.alpha()[j];
        if (a == 0.0) continue;
        g[j] = scale * a * std::pow(y[j], u.rho() - 1.0);
    }
    return g;
}

UtilityDescriptor compute_descriptor(const UtilityFunction& u)
{
    const bool positive = all_positive(u.alpha());
    UtilityDescriptor d;
    d.barrier_level = 0.0;

    switch (u.family()) {
    case UtilityFamily::CobbDouglas: {
        const double total = u.alpha().sum();
        d.is_barrier = positive;
        d.monotonicity = positive ? Monotonicity::StrictInterior : Monotonicity::WeaklyStrict;
        if (total > 1.0 + kSumTolerance) d.concavity = Concavity::PseudoconcaveInterior;
        else if (positive && total < 1.0 - kSumTolerance) d.concavity = Concavity::StrictlyConcaveInterior;
        else d.concavity = Concavity::Concave;
        d.differentiable_interior = true;
        break;
    }
    case UtilityFamily::Leontief:
        d.is_barrier = positive;
        d.monotonicity = positive ? Monotonicity::WeaklyStrict : Monotonicity::Monotone;
        d.concavity = Concavity::Concave;
        d.differentiable_interior = false;
        break;
    case UtilityFamily::CES: {
        const double rho = u.rho();
        const double kappa = u.kappa();
        d.is_barrier = positive && rho < 0.0;
        // With rho < 0 a zero coordinate pins u at 0, so strictness only
        // survives on the open orthant.
        if (!positive) d.monotonicity = Monotonicity::WeaklyStrict;
        else d.monotonicity = rho > 0.0 ? Monotonicity::Strict : Monotonicity::StrictInterior;
        if (positive && kappa < 1.0 && rho > 0.0 && rho < 1.0) d.concavity = Concavity::StrictlyConcave;
        else if (positive && kappa < 1.0 && rho < 0.0) d.concavity = Concavity::StrictlyConcaveInterior;
        else d.concavity = Concavity::Concave;
        d.differentiable_interior = true;
        break;
    }
    }
    return d;
}

std::string_view to_string(UtilityFamily f)
{
    switch (f) {
    case UtilityFamily::CobbDouglas: return "cobb_douglas";
    case UtilityFamily::Leontief: return "leontief";
    case UtilityFamily::CES: return "ces";
    }
    return "unknown";
}

std::string_view to_string(Monotonicity m)
{
    switch (m) {
    case Monotonicity::Monotone: return "monotone";
    case Monotonicity::WeaklyStrict: return "weakly_strict";
    case Monotonicity::Strict: return "strict";
    case Monotonicity::StrictInterior: return "strict_interior";
    }
    return "unknown";
}

std::string_view to_string(Concavity c)
{
    switch (c) {
    case Concavity::Concave: return "concave";
    case Concavity::StrictlyConcave: return "strictly_concave";
    case Concavity::StrictlyConcaveInterior: return "strictly_concave_interior";
    case Concavity::PseudoconcaveInterior: return "pseudoconcave_interior";
    }
    return "unknown";
}

}  // namespace utilscal
