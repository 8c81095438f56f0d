#pragma once

#include <Eigen/Core>

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace utilscal {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Index = Eigen::Index;

/// Absolute tolerance on constraint residuals used by membership tests.
inline constexpr double kMembershipTolerance = 1e-10;

enum class Sense { Minimize, Maximize };

/// A convex objective. Callables are given in the user's sense; maximize
/// objectives are negated on the way in so that everything downstream works
/// with minimization. `value`/`gradient` return the stored (minimize) form.
class ObjectiveFunction {
public:
    using ValueFn = std::function<double(const Vector&)>;
    using GradientFn = std::function<Vector(const Vector&)>;

    ObjectiveFunction(std::string name, ValueFn value, GradientFn gradient,
                      Sense sense = Sense::Minimize);

    [[nodiscard]] double value(const Vector& x) const;
    [[nodiscard]] Vector gradient(const Vector& x) const;

    [[nodiscard]] double to_user(double stored) const { return sense_ == Sense::Maximize ? -stored : stored; }
    [[nodiscard]] double to_stored(double user) const { return sense_ == Sense::Maximize ? -user : user; }
    [[nodiscard]] double user_value(const Vector& x) const { return to_user(value(x)); }

    [[nodiscard]] const std::string& name() const { return name_; }
    [[nodiscard]] Sense sense() const { return sense_; }

private:
    std::string name_;
    ValueFn value_;
    GradientFn gradient_;
    Sense sense_;
};

/// Closed convex set with an exact Euclidean projection.
class FeasibleSet {
public:
    enum class Kind { BoxSimplex, Box, Custom };

    using MembershipFn = std::function<bool(const Vector&, double)>;
    using ProjectionFn = std::function<Vector(const Vector&)>;

    /// {x : sum x = 1, 0 <= x <= 1}.
    static FeasibleSet box_simplex(Index n);
    static FeasibleSet box(Vector lower, Vector upper);
    /// User-defined set. Both callables are mandatory. `enclosing`, when given,
    /// is a simpler set containing this one; grid enumeration walks it.
    static FeasibleSet custom(Index n, MembershipFn membership, ProjectionFn projection,
                              std::shared_ptr<const FeasibleSet> enclosing = nullptr);

    [[nodiscard]] Kind kind() const { return kind_; }
    [[nodiscard]] Index dimension() const { return n_; }

    [[nodiscard]] bool contains(const Vector& x, double tol = kMembershipTolerance) const;
    [[nodiscard]] Vector project(const Vector& v) const;

    /// Bounds for Kind::Box.
    [[nodiscard]] const Vector& lower() const { return lower_; }
    [[nodiscard]] const Vector& upper() const { return upper_; }
    [[nodiscard]] const FeasibleSet* enclosing() const { return enclosing_.get(); }

    /// A canonical interior-ish point: barycenter for BoxSimplex, box midpoint
    /// for Box, projection of the enclosing set's center for Custom.
    [[nodiscard]] Vector center() const;

private:
    FeasibleSet() = default;

    Kind kind_ = Kind::Box;
    Index n_ = 0;
    Vector lower_;
    Vector upper_;
    MembershipFn membership_;
    ProjectionFn projection_;
    std::shared_ptr<const FeasibleSet> enclosing_;
};

class MultiObjectiveProblem {
public:
    MultiObjectiveProblem(std::vector<ObjectiveFunction> objectives, FeasibleSet feasible_set);

    [[nodiscard]] Index num_objectives() const { return static_cast<Index>(objectives_.size()); }
    [[nodiscard]] Index dimension() const { return feasible_set_.dimension(); }
    [[nodiscard]] const std::vector<ObjectiveFunction>& objectives() const { return objectives_; }
    [[nodiscard]] const ObjectiveFunction& objective(Index j) const { return objectives_[static_cast<std::size_t>(j)]; }
    [[nodiscard]] const FeasibleSet& feasible_set() const { return feasible_set_; }

private:
    std::vector<ObjectiveFunction> objectives_;
    FeasibleSet feasible_set_;
};

/// Disagreement reference point `a`, stored in minimize-form signs.
class ReferencePoint {
public:
    enum class Origin { FromPoint, Explicit };

    static ReferencePoint explicit_levels(Vector a);

    [[nodiscard]] const Vector& levels() const { return a_; }
    [[nodiscard]] Index size() const { return a_.size(); }
    [[nodiscard]] Origin origin() const { return origin_; }
    /// The decision vector a was computed from, if any.
    [[nodiscard]] const std::optional<Vector>& origin_point() const { return origin_point_; }

private:
    friend ReferencePoint reference_from_point(const MultiObjectiveProblem&, const Vector&);
    ReferencePoint(Vector a, Origin origin, std::optional<Vector> point)
        : a_(std::move(a)), origin_(origin), origin_point_(std::move(point)) {}

    Vector a_;
    Origin origin_ = Origin::Explicit;
    std::optional<Vector> origin_point_;
};

/// Objective vector in stored (minimize) form.
[[nodiscard]] Vector evaluate_objectives(const MultiObjectiveProblem& problem, const Vector& x);

/// Converts a stored-form objective vector to the user's signs, and back.
[[nodiscard]] Vector to_user_facing(const MultiObjectiveProblem& problem, const Vector& stored);
[[nodiscard]] Vector to_stored_form(const MultiObjectiveProblem& problem, const Vector& user);

/// a = f(x̄). Throws InputError if x̄ is not in K.
[[nodiscard]] ReferencePoint reference_from_point(const MultiObjectiveProblem& problem, const Vector& xbar);

/// True iff x ∈ K and f_j(x) < a_j - margin for every j.
[[nodiscard]] bool is_slater_point(const MultiObjectiveProblem& problem, const ReferencePoint& a,
                                   const Vector& x, double margin = 0.0);

/// a_j - f_j(x) for all j.
[[nodiscard]] Vector slater_margins(const MultiObjectiveProblem& problem, const ReferencePoint& a,
                                    const Vector& x);

/// Euclidean projection onto {x : sum x = 1, 0 <= x <= 1}.
[[nodiscard]] Vector project_box_simplex(const Vector& v);

}  // namespace utilscal
