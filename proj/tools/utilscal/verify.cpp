#include "commands.hpp"

#include "utilscal/errors.hpp"
#include "utilscal/pareto.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <ostream>
#include <random>

namespace utilscal::cli {

using nlohmann::json;

namespace {

struct CheckResult {
    std::string name;
    std::string status;  // pass | fail | skipped
    std::string detail;
};

double uniform(std::mt19937_64& rng)
{
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

Vector random_point_in(const FeasibleSet& set, std::mt19937_64& rng)
{
    const Index n = set.dimension();
    Vector z(n);
    switch (set.kind()) {
    case FeasibleSet::Kind::BoxSimplex: {
        for (Index i = 0; i < n; ++i) z[i] = -std::log(1.0 - uniform(rng));
        return z / z.sum();
    }
    case FeasibleSet::Kind::Box:
        for (Index i = 0; i < n; ++i) z[i] = set.lower()[i] + (set.upper()[i] - set.lower()[i]) * uniform(rng);
        return z;
    case FeasibleSet::Kind::Custom:
        break;
    }
    for (Index i = 0; i < n; ++i) z[i] = 4.0 * uniform(rng) - 2.0;
    return set.project(z);
}

MultiObjectiveProblem with_faulty_gradient(const MultiObjectiveProblem& problem)
{
    std::vector<ObjectiveFunction> objectives = problem.objectives();
    const ObjectiveFunction original = objectives.front();
    objectives.front() = ObjectiveFunction(
        original.name(), [original](const Vector& x) { return original.value(x); },
        [original](const Vector& x) { return Vector(1.5 * original.gradient(x) + Vector::Constant(x.size(), 0.01)); });
    return {std::move(objectives), problem.feasible_set()};
}

UtilityFunction default_utility(const RunConfig& config, Index m)
{
    for (const auto& s : config.solves) {
        const auto d = compute_descriptor(s.utility);
        if (d.is_barrier && d.differentiable_interior && s.utility.size() == m) return s.utility;
    }
    return UtilityFunction::cobb_douglas(Vector::Constant(m, 1.0 / static_cast<double>(m)));
}

bool grid_friendly(const MultiObjectiveProblem& problem)
{
    return problem.dimension() <= 3 && problem.feasible_set().kind() != FeasibleSet::Kind::Custom;
}

// Central differences with Richardson extrapolation over a shrinking step
// sequence; keeps the estimate whose successor changed it least.
Vector richardson_gradient(const std::function<double(const Vector&)>& f, const Vector& x)
{
    constexpr int kSteps = 8;
    Vector fd(x.size());
    for (Index i = 0; i < x.size(); ++i) {
        auto central = [&](double step) {
            Vector hi = x;
            Vector lo = x;
            hi[i] += step;
            lo[i] -= step;
            return (f(hi) - f(lo)) / (2.0 * step);
        };
        double step = 1e-3 * std::max(1.0, std::abs(x[i]));
        double previous = std::numeric_limits<double>::quiet_NaN();
        double best_change = std::numeric_limits<double>::infinity();
        fd[i] = std::numeric_limits<double>::quiet_NaN();
        for (int k = 0; k < kSteps; ++k, step /= 4.0) {
            const double estimate = (4.0 * central(step / 2.0) - central(step)) / 3.0;
            if (!std::isfinite(estimate)) continue;
            const double change = std::abs(estimate - previous);
            if (change < best_change) {
                best_change = change;
                fd[i] = estimate;
            }
            previous = estimate;
        }
    }
    return fd;
}

CheckResult check_gradient(const MultiObjectiveProblem& problem, const ReferencePoint& a, const Vector& slater,
                           const UtilityFunction& u, const VerifySpec& spec, std::uint64_t seed)
{
    CheckResult r{"gradient", "pass", ""};
    ScalarizedProblem sp(problem, a, u);
    std::mt19937_64 rng(seed);
    double worst = 0.0;
    for (int s = 0; s < spec.samples; ++s) {
        // Points on segments from the Slater point stay Slater by convexity.
        const Vector z = random_point_in(problem.feasible_set(), rng);
        double t = uniform(rng);
        Vector x = slater + t * (z - slater);
        while (!is_slater_point(problem, a, x) && t > 1e-12) {
            t *= 0.5;
            x = slater + t * (z - slater);
        }
        const Vector g = h_gradient(sp, x);
        const Vector fd = richardson_gradient([&sp](const Vector& p) { return h_value(sp, p).as_double(); }, x);
        const double scale = std::max({g.lpNorm<Eigen::Infinity>(), fd.lpNorm<Eigen::Infinity>(), 1e-300});
        worst = std::max(worst, (g - fd).lpNorm<Eigen::Infinity>() / scale);
    }
    r.detail = "worst relative error " + format_double(worst) + " over " + std::to_string(spec.samples) + " points";
    if (!(worst <= 1e-6)) r.status = "fail";
    return r;
}

CheckResult check_projection(const VerifySpec& spec, std::uint64_t seed)
{
    CheckResult r{"projection", "pass", ""};
    std::mt19937_64 rng(seed);
    int failures = 0;
    for (int s = 0; s < spec.samples; ++s) {
        const Index n = 2 + static_cast<Index>(rng() % 5);
        Vector v(n);
        for (Index i = 0; i < n; ++i) v[i] = 6.0 * uniform(rng) - 3.0;
        const Vector x = project_box_simplex(v);
        bool ok = std::abs(x.sum() - 1.0) <= 1e-12 && x.minCoeff() >= 0.0 && x.maxCoeff() <= 1.0;
        // Optimality: moving mass from k to i cannot decrease the distance.
        const Vector res = v - x;
        for (Index i = 0; ok && i < n; ++i) {
            for (Index k = 0; ok && k < n; ++k) {
                if (i != k && x[i] < 1.0 && x[k] > 0.0 && res[i] > res[k] + 1e-9) ok = false;
            }
        }
        if (!ok) ++failures;
    }
    r.detail = std::to_string(failures) + " of " + std::to_string(spec.samples) + " projections violate optimality";
    if (failures > 0) r.status = "fail";
    return r;
}

CheckResult check_domination(const MultiObjectiveProblem& problem, const ReferencePoint& a, const Vector& slater,
                             const RunConfig& config)
{
    CheckResult r{"domination", "pass", ""};
    std::vector<SolveSpec> specs = config.solves;
    if (specs.empty()) specs.push_back({default_utility(config, problem.num_objectives()), SolverConfig{}});
    const auto grid = evaluate_grid(problem.objectives(), problem.feasible_set(), config.verify.resolution);
    int dominated = 0;
    int runs = 0;
    for (const auto& spec : specs) {
        ScalarizedProblem sp(problem, a, spec.utility);
        if (!sp.descriptor().is_barrier || !sp.descriptor().differentiable_interior) continue;
        const SolveReport rep = solve(sp, slater, spec.solver);
        const Vector f = evaluate_objectives(problem, rep.final_x);
        ++runs;
        for (const auto& g : grid) {
            if (dominates(g.f, f, 1e-6)) {
                ++dominated;
                r.detail += spec.utility.label() + " solution dominated by grid point; ";
                break;
            }
        }
    }
    r.detail += std::to_string(runs) + " solves checked against " + std::to_string(grid.size()) + " grid points";
    if (dominated > 0) r.status = "fail";
    return r;
}

CheckResult check_compromise(const MultiObjectiveProblem& problem, const ReferencePoint& a, const RunConfig& config)
{
    CheckResult r{"compromise", "pass", ""};
    const auto grid = enumerate_grid(problem.feasible_set(), config.verify.resolution);
    if (std::none_of(grid.begin(), grid.end(), [&](const Vector& x) { return is_slater_point(problem, a, x); })) {
        return {"compromise", "skipped", "no Slater point on the grid"};
    }
    const Index m = problem.num_objectives();
    Vector alpha = default_utility(config, m).alpha();
    if (!(alpha.array() > 0.0).all()) alpha = Vector::Ones(m);
    for (double p : config.verify.p_values) {
        const auto res = compromise_comparison(problem, a, alpha, p, config.verify.resolution);
        r.detail += "p=" + format_double(p) + (res.coincide ? " coincide; " : " differ; ");
        if (!res.coincide) r.status = "fail";
    }
    return r;
}

CheckResult check_weight_recovery(const MultiObjectiveProblem& problem, const ReferencePoint& a, int resolution)
{
    CheckResult r{"weight_recovery", "pass", ""};
    constexpr std::size_t kMaxCandidates = 25;
    const auto front = grid_oracle(problem, resolution);
    std::vector<Vector> candidates;
    for (const auto& g : front) {
        if (is_slater_point(problem, a, g.x)) candidates.push_back(g.x);
    }
    if (candidates.empty()) return {"weight_recovery", "skipped", "no grid Pareto point is a Slater point"};
    std::vector<Vector> picked;
    const std::size_t count = std::min(kMaxCandidates, candidates.size());
    for (std::size_t i = 0; i < count; ++i) picked.push_back(candidates[i * candidates.size() / count]);

    const auto grid = enumerate_grid(problem.feasible_set(), resolution);
    int failures = 0;
    for (const Vector& x_hat : picked) {
        ScalarizedProblem sp(problem, a, UtilityFunction::leontief(recover_weights_min(problem, a, x_hat)));
        const double at_hat = h_value(sp, x_hat).as_double();
        for (const Vector& x : grid) {
            if (h_value(sp, x).as_double() > at_hat + 1e-9) {
                ++failures;
                break;
            }
        }
    }
    r.detail = std::to_string(failures) + " of " + std::to_string(picked.size()) + " recovered weightings fail";
    if (failures > 0) r.status = "fail";
    return r;
}

}  // namespace

int cmd_verify(const RunConfig& config, const CliOptions&, std::ostream& out)
{
    Instance inst = build_instance(config);
    const MultiObjectiveProblem problem =
        config.verify.inject_gradient_fault ? with_faulty_gradient(inst.problem) : inst.problem;
    const ReferencePoint& a = inst.reference;

    std::vector<std::string> checks = config.verify.checks;
    if (checks.empty()) checks = {"gradient", "projection", "domination", "compromise", "weight_recovery"};

    const SlaterOutcome slater = find_slater(problem, a, inst.start, config.slater_budget);
    std::vector<CheckResult> results;
    for (const auto& name : checks) {
        spdlog::info("verify: {}", name);
        const bool needs_slater = name == "gradient" || name == "domination";
        const bool needs_grid = name == "domination" || name == "compromise" || name == "weight_recovery";
        if (needs_slater && !slater.point) {
            results.push_back({name, "skipped", "reference admits no Slater point"});
            continue;
        }
        if (needs_grid && !grid_friendly(problem)) {
            results.push_back({name, "skipped", "grid checks need n <= 3 and a box or simplex"});
            continue;
        }
        try {
            if (name == "gradient") {
                results.push_back(check_gradient(problem, a, *slater.point,
                                                 default_utility(config, problem.num_objectives()), config.verify,
                                                 config.seed));
            } else if (name == "projection") {
                results.push_back(check_projection(config.verify, config.seed));
            } else if (name == "domination") {
                results.push_back(check_domination(problem, a, *slater.point, config));
            } else if (name == "compromise") {
                results.push_back(check_compromise(problem, a, config));
            } else {
                results.push_back(check_weight_recovery(problem, a, config.verify.resolution));
            }
        } catch (const Error& e) {
            results.push_back({name, "fail", e.what()});
        }
    }

    bool passed = true;
    json list = json::array();
    for (const auto& c : results) {
        passed = passed && c.status != "fail";
        list.push_back({{"name", c.name}, {"status", c.status}, {"detail", c.detail}});
    }
    out << json{{"checks", list}, {"passed", passed}}.dump(2) << '\n';
    return passed ? kExitOk : kExitError;
}

}  // namespace utilscal::cli
