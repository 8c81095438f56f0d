#pragma once

#include "utilscal/problem.hpp"
#include "utilscal/utility.hpp"

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace utilscal {

inline constexpr double kDominationTolerance = 1e-9;
inline constexpr int kMaxGridResolution = 401;

// ---------------------------------------------------------------------------
// Domination

/// Relation of `fa` to `fb`, both in minimize form. The two "By" cases are
/// the mirror images so that compare(a, b) and compare(b, a) always agree.
enum class Relation {
    StrictlyDominates,    // fa_j < fb_j - tol for every j
    Dominates,            // fa <= fb + tol, and fa_j < fb_j - tol for some j
    Equal,                // |fa - fb| <= tol componentwise
    Incomparable,
    IsDominated,
    IsStrictlyDominated,
};

[[nodiscard]] std::string_view to_string(Relation r);

struct DominationVerdict {
    Relation relation = Relation::Incomparable;
    double tolerance = kDominationTolerance;
};

[[nodiscard]] DominationVerdict compare(const Vector& fa, const Vector& fb, double tol = kDominationTolerance);

/// compare(fa, fb) is StrictlyDominates or Dominates.
[[nodiscard]] bool dominates(const Vector& fa, const Vector& fb, double tol = kDominationTolerance);

/// Indices of the points not dominated by any other point. Sorting first
/// means each candidate only needs checking against the running archive.
[[nodiscard]] std::vector<std::size_t> nondominated_indices(const std::vector<Vector>& points,
                                                            double tol = kDominationTolerance);

// ---------------------------------------------------------------------------
// Grid oracle

struct GridPoint {
    Vector x;
    Vector f;  // stored form
};

/// Feasible grid of K with `resolution` points per axis: barycentric for the
/// box-simplex, tensor for boxes, the enclosing set filtered by membership
/// for custom sets. Limited to n <= 3.
[[nodiscard]] std::vector<Vector> enumerate_grid(const FeasibleSet& set, int resolution);

[[nodiscard]] std::vector<GridPoint> evaluate_grid(std::span<const ObjectiveFunction> objectives,
                                                   const FeasibleSet& set, int resolution);

/// Non-dominated subset of the feasible grid. Accepts m = 1 (plain argmin).
[[nodiscard]] std::vector<GridPoint> grid_oracle(std::span<const ObjectiveFunction> objectives,
                                                 const FeasibleSet& set, int resolution,
                                                 double tol = kDominationTolerance);
[[nodiscard]] std::vector<GridPoint> grid_oracle(const MultiObjectiveProblem& problem, int resolution,
                                                 double tol = kDominationTolerance);

// ---------------------------------------------------------------------------
// Frontier sweep

struct WeightedSum {
    double lambda = 0.0;
};
struct EpsConstraint {
    double level = 0.0;  // stored form of the last objective
    double lambda = 0.0;
};
struct UtilitySolve {
    std::string utility;
};
using FrontierGenerator = std::variant<WeightedSum, EpsConstraint, UtilitySolve>;

struct FrontierPoint {
    Vector x;
    Vector objectives;  // user-facing signs
    FrontierGenerator generator;
    int level_index = 0;
    int lambda_index = 0;
    bool converged = false;
    bool nondominated = false;
    bool dominates_reference = false;
};

struct SweepOptions {
    int n_levels = 100;
    int n_lambda = 1000;
    /// Worker threads; 0 selects the hardware concurrency.
    int jobs = 0;
    /// Largest weight of the quadratic penalty enforcing f_m = level (on f_m
    /// scaled by its range over K). The multiplier method ramps up to it.
    double penalty = 1e6;
    int max_iterations = 5000;  // per cell, summed over multiplier rounds
    double tolerance = 1e-9;
    /// Range of the constrained objective in user-facing signs. Required for
    /// custom sets; computed from K otherwise.
    std::optional<std::pair<double, double>> level_range;
};

/// Weighted-sum sweep (m = 2) or weighted sum of f1, f2 under the equality
/// f_m = level (m = 3). Output is ordered by (level index, lambda index)
/// regardless of the number of threads.
[[nodiscard]] std::vector<FrontierPoint> frontier_sweep(const MultiObjectiveProblem& problem,
                                                        const ReferencePoint& a, const SweepOptions& options);

// ---------------------------------------------------------------------------
// Weight recovery and compromise programming

/// alpha_j = 1 / (a_j - f_j(x_hat)) where the constraint is slack, 0 elsewhere.
[[nodiscard]] Vector recover_weights_min(const MultiObjectiveProblem& problem, const ReferencePoint& a,
                                         const Vector& x_hat);

struct SmoothFamily {
    UtilityFamily family = UtilityFamily::CobbDouglas;  // CobbDouglas or CES
    double rho = -1.0;                                  // CES only

    static SmoothFamily cobb_douglas() { return {UtilityFamily::CobbDouglas, 0.0}; }
    static SmoothFamily ces(double rho) { return {UtilityFamily::CES, rho}; }
};

struct RecoveryOptions {
    /// Grid used to certify the result a posteriori; 0 skips the check.
    int verification_resolution = 201;
    double residual_tolerance = 1e-6;
    double verification_tolerance = 1e-8;
    int max_iterations = 20000;
};

/// Weights under which x_hat maximizes the CD / CES(kappa = 1) scalarization,
/// normalized to sum to one. Throws RecoveryFailed when no weights make x_hat
/// stationary or when the grid exhibits a better point.
[[nodiscard]] Vector recover_weights_smooth(const MultiObjectiveProblem& problem, const ReferencePoint& a,
                                            const Vector& x_hat, SmoothFamily family,
                                            const RecoveryOptions& options = {});

/// Maps (objective index, benefit a_j - f_j) to the compromise criterion g_j.
using CompromiseTransform = std::function<double(Index, double)>;

struct CompromiseResult {
    bool coincide = false;
    std::vector<std::size_t> utility_argmax;    // indices into the Slater grid
    std::vector<std::size_t> compromise_argmin;
    std::size_t slater_points = 0;
};

/// Compares the grid argmax of CES(kappa = 1, rho = -p, alpha) with the grid
/// argmin of (sum alpha_j g_j^p)^(1/p), g_j = 1 / (a_j - f_j) by default.
[[nodiscard]] CompromiseResult compromise_comparison(const MultiObjectiveProblem& problem, const ReferencePoint& a,
                                                     const Vector& alpha, double p, int resolution,
                                                     const CompromiseTransform& transform = {});

[[nodiscard]] bool compromise_equivalence_check(const MultiObjectiveProblem& problem, const ReferencePoint& a,
                                                const Vector& alpha, double p, int resolution);

}  // namespace utilscal
