#include "config.hpp"

#include "utilscal/errors.hpp"

#include <algorithm>
#include <fstream>
#include <initializer_list>

namespace utilscal::cli {

using nlohmann::json;

namespace {

void check_keys(const json& obj, std::initializer_list<std::string_view> allowed, const std::string& where)
{
    if (!obj.is_object()) throw InputError(where + ": expected an object");
    for (const auto& [key, _] : obj.items()) {
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
            throw InputError(where + ": unknown key '" + key + "'");
        }
    }
}

template <class T>
T get(const json& obj, const std::string& key, const std::string& where)
{
    try {
        return obj.at(key).get<T>();
    } catch (const json::exception& e) {
        throw InputError(where + "." + key + ": " + e.what());
    }
}

template <class T>
T get_or(const json& obj, const std::string& key, T fallback, const std::string& where)
{
    return obj.contains(key) ? get<T>(obj, key, where) : fallback;
}

Vector get_vector(const json& obj, const std::string& key, const std::string& where)
{
    const auto values = get<std::vector<double>>(obj, key, where);
    if (values.empty()) throw InputError(where + "." + key + ": empty vector");
    return Eigen::Map<const Vector>(values.data(), static_cast<Index>(values.size()));
}

ProblemSource parse_problem(const json& p, const std::filesystem::path& base)
{
    const std::string where = "problem";
    if (!p.is_object()) throw InputError(where + ": expected an object");
    const auto type = get<std::string>(p, "type", where);
    if (type == "toy") {
        check_keys(p, {"type", "variant"}, where);
        ToySource toy{get_or<std::string>(p, "variant", "segment", where)};
        if (toy.variant != "segment" && toy.variant != "weak_pareto") {
            throw InputError(where + ".variant: expected 'segment' or 'weak_pareto'");
        }
        return toy;
    }
    if (type == "synthetic") {
        check_keys(p, {"type", "n", "periods", "seed"}, where);
        SyntheticSource s;
        s.n = get_or<Index>(p, "n", s.n, where);
        s.periods = get_or<Index>(p, "periods", s.periods, where);
        if (p.contains("seed")) s.seed = get<std::uint64_t>(p, "seed", where);
        if (s.n < 1 || s.periods < 2) throw InputError(where + ": need n >= 1 and periods >= 2");
        return s;
    }
    if (type == "portfolio") {
        check_keys(p, {"type", "series", "esg", "kind"}, where);
        FileSource f;
        f.series = base / get<std::string>(p, "series", where);
        f.esg = base / get<std::string>(p, "esg", where);
        const auto kind = get_or<std::string>(p, "kind", "prices", where);
        if (kind == "prices") f.kind = SeriesKind::Prices;
        else if (kind == "returns") f.kind = SeriesKind::Returns;
        else throw InputError(where + ".kind: expected 'prices' or 'returns'");
        return f;
    }
    throw InputError(where + ".type: expected 'toy', 'synthetic' or 'portfolio'");
}

ReferenceSpec parse_reference(const json& r)
{
    const std::string where = "reference";
    if (r.is_string()) {
        if (r.get<std::string>() != "equally_weighted") throw InputError(where + ": unknown reference '" + r.get<std::string>() + "'");
        return EquallyWeighted{};
    }
    if (r.contains("point")) {
        check_keys(r, {"point"}, where);
        return FromPoint{get_vector(r, "point", where)};
    }
    check_keys(r, {"explicit_a", "start"}, where);
    if (!r.contains("explicit_a")) throw InputError(where + ": expected 'equally_weighted', {point} or {explicit_a}");
    ExplicitLevels e{get_vector(r, "explicit_a", where), std::nullopt};
    if (r.contains("start")) e.start = get_vector(r, "start", where);
    return e;
}

SolverConfig parse_solver(const json& s)
{
    const std::string where = "solver";
    check_keys(s, {"gamma", "delta", "alpha_base", "tau", "tol_stationarity", "max_iterations", "max_backtracks",
                   "lipschitz_constant"},
               where);
    SolverConfig c;
    c.gamma = get_or(s, "gamma", c.gamma, where);
    c.delta = get_or(s, "delta", c.delta, where);
    c.alpha_base = get_or(s, "alpha_base", c.alpha_base, where);
    c.tau = get_or(s, "tau", c.tau, where);
    c.tol_stationarity = get_or(s, "tol_stationarity", c.tol_stationarity, where);
    c.max_iterations = get_or(s, "max_iterations", c.max_iterations, where);
    c.max_backtracks = get_or(s, "max_backtracks", c.max_backtracks, where);
    if (s.contains("lipschitz_constant")) c.lipschitz_constant = get<double>(s, "lipschitz_constant", where);
    c.validate();
    return c;
}

SweepOptions parse_sweep(const json& s)
{
    const std::string where = "sweep";
    check_keys(s, {"n_levels", "n_lambda", "penalty", "max_iterations", "tolerance", "level_range"}, where);
    SweepOptions o;
    o.n_levels = get_or(s, "n_levels", o.n_levels, where);
    o.n_lambda = get_or(s, "n_lambda", o.n_lambda, where);
    o.penalty = get_or(s, "penalty", o.penalty, where);
    o.max_iterations = get_or(s, "max_iterations", o.max_iterations, where);
    o.tolerance = get_or(s, "tolerance", o.tolerance, where);
    if (s.contains("level_range")) {
        const auto r = get<std::vector<double>>(s, "level_range", where);
        if (r.size() != 2) throw InputError(where + ".level_range: expected [low, high]");
        o.level_range = std::pair{r[0], r[1]};
    }
    if (o.n_levels < 1 || o.n_lambda < 1) throw InputError(where + ": sizes must be positive");
    return o;
}

VerifySpec parse_verify(const json& v)
{
    const std::string where = "verify";
    check_keys(v, {"checks", "samples", "resolution", "p", "inject_gradient_fault"}, where);
    VerifySpec s;
    s.checks = get_or(v, "checks", std::vector<std::string>{}, where);
    s.samples = get_or(v, "samples", s.samples, where);
    s.resolution = get_or(v, "resolution", s.resolution, where);
    s.p_values = get_or(v, "p", s.p_values, where);
    s.inject_gradient_fault = get_or(v, "inject_gradient_fault", s.inject_gradient_fault, where);
    for (const auto& c : s.checks) {
        if (c != "gradient" && c != "projection" && c != "domination" && c != "compromise" && c != "weight_recovery") {
            throw InputError(where + ".checks: unknown check '" + c + "'");
        }
    }
    if (s.samples < 1) throw InputError(where + ".samples must be positive");
    return s;
}

}  // namespace

UtilityFunction parse_utility(const json& u)
{
    const std::string where = "utility";
    if (!u.is_object()) throw InputError(where + ": expected an object");
    const auto family = get<std::string>(u, "family", where);
    if (family == "cobb_douglas") {
        check_keys(u, {"family", "alpha"}, where);
        return UtilityFunction::cobb_douglas(get_vector(u, "alpha", where));
    }
    if (family == "leontief") {
        check_keys(u, {"family", "alpha"}, where);
        return UtilityFunction::leontief(get_vector(u, "alpha", where));
    }
    if (family == "linear") {
        check_keys(u, {"family", "alpha"}, where);
        return UtilityFunction::linear(get_vector(u, "alpha", where));
    }
    if (family == "ces") {
        check_keys(u, {"family", "alpha", "rho", "kappa"}, where);
        return UtilityFunction::ces(get_vector(u, "alpha", where), get<double>(u, "rho", where),
                                    get_or(u, "kappa", 1.0, where));
    }
    throw InputError(where + ".family: expected cobb_douglas, leontief, ces or linear");
}

RunConfig parse_config(const json& doc, const std::filesystem::path& base_dir)
{
    check_keys(doc, {"problem", "reference", "utility", "solver", "solves", "slater", "sweep", "verify", "output", "seed"},
               "config");
    if (!doc.contains("problem")) throw InputError("config: missing 'problem'");
    if (!doc.contains("reference")) throw InputError("config: missing 'reference'");

    RunConfig c{parse_problem(doc.at("problem"), base_dir), parse_reference(doc.at("reference")), {}, kDefaultSlaterBudget,
                {}, {}, ".", 0};
    c.seed = get_or<std::uint64_t>(doc, "seed", 0, "config");

    if (doc.contains("solves")) {
        if (doc.contains("utility") || doc.contains("solver")) {
            throw InputError("config: give either 'solves' or 'utility'/'solver', not both");
        }
        const json& list = doc.at("solves");
        if (!list.is_array() || list.empty()) throw InputError("solves: expected a non-empty array");
        for (const json& entry : list) {
            check_keys(entry, {"utility", "solver"}, "solves[]");
            if (!entry.contains("utility")) throw InputError("solves[]: missing 'utility'");
            c.solves.push_back({parse_utility(entry.at("utility")),
                                entry.contains("solver") ? parse_solver(entry.at("solver")) : SolverConfig{}});
        }
    } else if (doc.contains("utility")) {
        c.solves.push_back({parse_utility(doc.at("utility")),
                            doc.contains("solver") ? parse_solver(doc.at("solver")) : SolverConfig{}});
    } else if (doc.contains("solver")) {
        throw InputError("config: 'solver' given without 'utility'");
    }

    if (doc.contains("slater")) {
        check_keys(doc.at("slater"), {"budget"}, "slater");
        c.slater_budget = get_or(doc.at("slater"), "budget", c.slater_budget, "slater");
        if (c.slater_budget < 1) throw InputError("slater.budget must be positive");
    }
    if (doc.contains("sweep")) c.sweep = parse_sweep(doc.at("sweep"));
    if (doc.contains("verify")) c.verify = parse_verify(doc.at("verify"));
    if (doc.contains("output")) {
        check_keys(doc.at("output"), {"dir"}, "output");
        c.output_dir = base_dir / get_or<std::string>(doc.at("output"), "dir", ".", "output");
    }
    return c;
}

RunConfig load_config(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) throw InputError("cannot open config " + path.string());
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw InputError(path.string() + ": " + e.what());
    }
    return parse_config(doc, path.parent_path());
}

namespace {

MultiObjectiveProblem toy_problem(const std::string& variant)
{
    std::vector<ObjectiveFunction> f;
    if (variant == "segment") {
        f.emplace_back(
            "f1", [](const Vector& x) { return x[0] * x[0]; },
            [](const Vector& x) { return Vector::Constant(1, 2.0 * x[0]); });
        f.emplace_back(
            "f2", [](const Vector& x) { return (x[0] - 1.0) * (x[0] - 1.0); },
            [](const Vector& x) { return Vector::Constant(1, 2.0 * (x[0] - 1.0)); });
        return {std::move(f), FeasibleSet::box(Vector::Zero(1), Vector::Ones(1))};
    }
    // f3 = x2 >= 0 on the box, so a reference with a_3 = 0 pins it.
    for (double c : {0.3, 0.7}) {
        f.emplace_back(
            c < 0.5 ? "f1" : "f2", [c](const Vector& x) { return (x[0] - c) * (x[0] - c) + x[1]; },
            [c](const Vector& x) { return Vector{{2.0 * (x[0] - c), 1.0}}; });
    }
    f.emplace_back(
        "f3", [](const Vector& x) { return x[1]; }, [](const Vector&) { return Vector{{0.0, 1.0}}; });
    return {std::move(f), FeasibleSet::box(Vector::Zero(2), Vector::Ones(2))};
}

}  // namespace

Instance build_instance(const RunConfig& config)
{
    std::optional<MultiObjectiveProblem> problem;
    std::string description;
    if (const auto* toy = std::get_if<ToySource>(&config.problem)) {
        problem = toy_problem(toy->variant);
        description = "toy:" + toy->variant;
    } else if (const auto* syn = std::get_if<SyntheticSource>(&config.problem)) {
        const std::uint64_t seed = syn->seed.value_or(config.seed);
        const MarketData data = generate_synthetic_market(syn->n, syn->periods, seed);
        Moments m = estimate_moments(data);
        problem = build_portfolio_problem(std::move(m.mu), std::move(m.sigma), data.esg).wrapped;
        description = "synthetic:n=" + std::to_string(syn->n) + ",T=" + std::to_string(syn->periods) +
                      ",seed=" + std::to_string(seed);
    } else {
        const auto& file = std::get<FileSource>(config.problem);
        const MarketData data = load_returns_csv(file.series, file.kind, file.esg);
        Moments m = estimate_moments(data);
        problem = build_portfolio_problem(std::move(m.mu), std::move(m.sigma), data.esg).wrapped;
        description = "portfolio:" + file.series.filename().string();
    }

    const FeasibleSet& set = problem->feasible_set();
    if (std::holds_alternative<EquallyWeighted>(config.reference)) {
        const Vector center = set.center();
        return {*problem, reference_from_point(*problem, center), center, description};
    }
    if (const auto* from = std::get_if<FromPoint>(&config.reference)) {
        return {*problem, reference_from_point(*problem, from->x), from->x, description};
    }
    const auto& levels = std::get<ExplicitLevels>(config.reference);
    if (levels.a.size() != problem->num_objectives()) {
        throw InputError("reference.explicit_a: expected " + std::to_string(problem->num_objectives()) + " entries");
    }
    ReferencePoint a = ReferencePoint::explicit_levels(to_stored_form(*problem, levels.a));
    const Vector start = levels.start.value_or(set.center());
    if (start.size() != problem->dimension() || !set.contains(start) ||
        (slater_margins(*problem, a, start).array() < 0.0).any()) {
        throw InputError(levels.start ? "reference.start: point is not in F = {x in K : f(x) <= a}"
                                      : "reference: the center of K violates f <= a; give reference.start");
    }
    return {*problem, std::move(a), start, description};
}

}  // namespace utilscal::cli
