#pragma once

#include "utilscal/scalarizer.hpp"

#include <optional>
#include <string_view>
#include <vector>

namespace utilscal {

struct SolverConfig {
    double gamma = 0.5;        // Armijo sufficient-increase constant, in (0,1)
    double delta = 0.5;        // backtracking contraction, in (0,1)
    double alpha_base = 1.0;   // first trial step of every backtracking
    double tau = 1.0;          // gradient step inside the projection; beta = 1/tau
    double tol_stationarity = 1e-8;
    int max_iterations = 10000;
    int max_backtracks = 60;
    /// Optional Lipschitz constant of grad h. When set, alpha_base must exceed
    /// 2 (1 - gamma) / (tau L) so accepted steps stay bounded below.
    std::optional<double> lipschitz_constant;

    /// Throws ConfigurationError when a field is out of range.
    void validate() const;
};

enum class Termination { Stationary, MaxIterations, LineSearchFailure };

[[nodiscard]] std::string_view to_string(Termination t);

struct IterationRecord {
    int iteration = 0;
    double h = 0.0;            // h(x^{k+1}) after the accepted step
    double direction_norm = 0.0;
    double step = 0.0;         // accepted alpha^k
    int backtracks = 0;
    /// h(x^{k+1}) - h(x^k), by quadrature of the directional derivative when
    /// it is too small for the difference of rounded h values to resolve.
    double gain = 0.0;
    double min_margin = 0.0;   // min_j a_j - f_j(x^{k+1})
};

struct SolveReport {
    Vector initial_x;
    double initial_h = 0.0;
    Vector initial_objectives;  // user-facing signs

    Vector final_x;
    double final_h = 0.0;
    Vector final_objectives;    // user-facing signs
    int iterations = 0;
    Termination termination = Termination::MaxIterations;
    /// ||Proj_K(x + tau grad h) - x|| at final_x.
    double stationarity_residual = 0.0;
    std::vector<IterationRecord> trace;
    /// a_j - f_j(final_x), stored form.
    Vector slater_certificate;
};

/// d = Proj_K(x + tau grad h(x)) - x. Satisfies grad h^T d >= |d|^2 / tau.
[[nodiscard]] Vector ascent_direction(const ScalarizedProblem& sp, const Vector& x, double tau);

struct BacktrackResult {
    double step = 0.0;
    int backtracks = 0;
    double h_new = 0.0;
    double gain = 0.0;  // h_new - h(x), see IterationRecord::gain
};

/// Smallest j >= 0 such that alpha = delta^j alpha_base keeps x + alpha d in
/// K and passes the Armijo test with a strictly positive gain. Throws
/// LineSearchFailure past max_backtracks.
[[nodiscard]] BacktrackResult backtrack(const ScalarizedProblem& sp, const Vector& x, const Vector& d,
                                        const SolverConfig& cfg);

/// Projected-gradient ascent on h from a Slater start x0. Requires a barrier,
/// monotone utility that is differentiable on the interior.
[[nodiscard]] SolveReport solve(const ScalarizedProblem& sp, const Vector& x0, const SolverConfig& cfg = {});

}  // namespace utilscal
