#include "commands.hpp"

#include "utilscal/errors.hpp"

#include <CLI11.hpp>
#include <spdlog/spdlog.h>

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

namespace utilscal::cli {

using nlohmann::json;

namespace {

json to_json(const Vector& v)
{
    return std::vector<double>(v.data(), v.data() + v.size());
}

json to_json(const SlaterOutcome& o)
{
    json j;
    j["kind"] = std::string(to_string(o.kind));
    j["pinned"] = o.pinned;
    j["point"] = o.point ? to_json(*o.point) : json(nullptr);
    json witnesses = json::array();
    for (const auto& w : o.witnesses) witnesses.push_back(w ? to_json(*w) : json(nullptr));
    j["witnesses"] = witnesses;
    return j;
}

json to_json(const SolveReport& r, bool trace)
{
    json j;
    j["initial_x"] = to_json(r.initial_x);
    j["initial_h"] = r.initial_h;
    j["initial_objectives"] = to_json(r.initial_objectives);
    j["final_x"] = to_json(r.final_x);
    j["final_h"] = r.final_h;
    j["final_objectives"] = to_json(r.final_objectives);
    j["iterations"] = r.iterations;
    j["termination"] = std::string(to_string(r.termination));
    j["stationarity_residual"] = r.stationarity_residual;
    j["margins"] = to_json(r.slater_certificate);
    if (trace) {
        json t = json::array();
        for (const auto& it : r.trace) {
            t.push_back({{"iteration", it.iteration},
                         {"h", it.h},
                         {"direction_norm", it.direction_norm},
                         {"step", it.step},
                         {"backtracks", it.backtracks},
                         {"gain", it.gain},
                         {"min_margin", it.min_margin}});
        }
        j["trace"] = t;
    }
    return j;
}

json solver_json(const SolverConfig& c)
{
    json j{{"gamma", c.gamma},
           {"delta", c.delta},
           {"alpha_base", c.alpha_base},
           {"tau", c.tau},
           {"tol_stationarity", c.tol_stationarity},
           {"max_iterations", c.max_iterations},
           {"max_backtracks", c.max_backtracks}};
    if (c.lipschitz_constant) j["lipschitz_constant"] = *c.lipschitz_constant;
    return j;
}

UtilityFunction restrict_utility(const UtilityFunction& u, const std::vector<Index>& kept)
{
    Vector alpha(static_cast<Index>(kept.size()));
    for (std::size_t i = 0; i < kept.size(); ++i) alpha[static_cast<Index>(i)] = u.alpha()[kept[i]];
    switch (u.family()) {
    case UtilityFamily::CobbDouglas: return UtilityFunction::cobb_douglas(alpha);
    case UtilityFamily::Leontief: return UtilityFunction::leontief(alpha);
    case UtilityFamily::CES: return UtilityFunction::ces(alpha, u.rho(), u.kappa());
    }
    throw InputError("unknown utility family");
}

std::filesystem::path output_dir(const RunConfig& config, const CliOptions& options)
{
    std::filesystem::path dir = options.out.value_or(config.output_dir);
    std::filesystem::create_directories(dir);
    return dir;
}

void write_file(const std::filesystem::path& path, const std::string& content)
{
    std::ofstream f(path, std::ios::binary);
    if (!f) throw InputError("cannot write " + path.string());
    f << content;
    spdlog::info("wrote {}", path.string());
}

std::string fixed_width(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%12.4e", v);
    return buf;
}

std::string right_aligned(const std::string& text)
{
    return std::string(12 - std::min<std::size_t>(12, text.size()), ' ') + text;
}

std::string summary_table(const Pipeline& p)
{
    const auto& problem = p.instance.problem;
    const Index m = problem.num_objectives();
    std::ostringstream os;
    std::string head = "utility";
    head.resize(30, ' ');
    os << head;
    for (const char* point : {"x0", "x*"}) {
        for (Index j = 0; j < m; ++j) os << ' ' << right_aligned("f" + std::to_string(j + 1) + "(" + point + ")");
        os << ' ' << right_aligned(std::string("h(") + point + ")");
    }
    os << '\n';
    for (const auto& run : p.runs) {
        std::string label = run.label;
        label.resize(std::max<std::size_t>(label.size(), 30), ' ');
        os << label;
        const Vector f0 = to_user_facing(problem, evaluate_objectives(problem, run.report.initial_x));
        for (Index j = 0; j < m; ++j) os << ' ' << fixed_width(f0[j]);
        os << ' ' << fixed_width(run.report.initial_h);
        for (Index j = 0; j < m; ++j) os << ' ' << fixed_width(run.final_objectives[j]);
        os << ' ' << fixed_width(run.report.final_h) << '\n';
    }
    return os.str();
}

}  // namespace

std::string format_double(double v)
{
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return ec == std::errc() ? std::string(buf, ptr) : std::string("nan");
}

Pipeline run_pipeline(const RunConfig& config)
{
    Pipeline p{build_instance(config), {}, std::nullopt, std::nullopt, {}};
    const auto& problem = p.instance.problem;
    const auto& a = p.instance.reference;
    spdlog::info("problem {} (n={}, m={})", p.instance.description, problem.dimension(), problem.num_objectives());

    p.slater = find_slater(problem, a, p.instance.start, config.slater_budget);
    spdlog::info("slater search: {}", to_string(p.slater.kind));

    const MultiObjectiveProblem* target = &problem;
    const ReferencePoint* target_ref = &a;
    std::vector<Index> kept;
    if (p.slater.kind == SlaterKind::SlaterPoint) {
        p.x0 = *p.slater.point;
    } else if (p.slater.kind == SlaterKind::WeakParetoRegion) {
        p.reduced = reduce_problem(problem, a, p.slater.pinned);
        kept = p.reduced->kept;
        // The average of the surviving witnesses is strictly feasible for
        // every kept objective and feasible for the folded ones.
        Vector avg = Vector::Zero(problem.dimension());
        for (Index j : kept) avg += *p.slater.witnesses[static_cast<std::size_t>(j)];
        avg /= static_cast<double>(kept.size());
        if (!is_slater_point(p.reduced->problem, p.reduced->reference, avg)) {
            const SlaterOutcome inner = find_slater(p.reduced->problem, p.reduced->reference, p.instance.start,
                                                    config.slater_budget);
            if (!inner.point) throw Error("reduced problem has no Slater point");
            avg = *inner.point;
        }
        p.x0 = avg;
        target = &p.reduced->problem;
        target_ref = &p.reduced->reference;
        spdlog::info("reduced to {} objectives", kept.size());
    } else {
        return p;
    }

    for (const SolveSpec& spec : config.solves) {
        const UtilityFunction u = p.reduced ? restrict_utility(spec.utility, kept) : spec.utility;
        ScalarizedProblem sp(*target, *target_ref, u);
        if (!sp.descriptor().is_barrier || !sp.descriptor().differentiable_interior) {
            throw ConfigurationError("utility " + u.label() +
                                     " is not a differentiable barrier; the ascent method cannot use it");
        }
        UtilityRun run{spec.utility.label(), solve(sp, *p.x0, spec.solver), {}};
        run.final_objectives = to_user_facing(problem, evaluate_objectives(problem, run.report.final_x));
        spdlog::info("{}: {} after {} iterations, h {} -> {}", run.label, to_string(run.report.termination),
                     run.report.iterations, run.report.initial_h, run.report.final_h);
        p.runs.push_back(std::move(run));
    }
    return p;
}

int cmd_slater(const RunConfig& config, const CliOptions&, std::ostream& out)
{
    const Instance inst = build_instance(config);
    const SlaterOutcome outcome = find_slater(inst.problem, inst.reference, inst.start, config.slater_budget);
    json j = to_json(outcome);
    j["reference"] = to_json(to_user_facing(inst.problem, inst.reference.levels()));
    if (outcome.point) j["margins"] = to_json(slater_margins(inst.problem, inst.reference, *outcome.point));
    out << j.dump(2) << '\n';
    switch (outcome.kind) {
    case SlaterKind::SlaterPoint: return kExitOk;
    case SlaterKind::WeakParetoRegion: return kExitWeakPareto;
    case SlaterKind::ParetoRegion: return kExitPareto;
    }
    return kExitError;
}

int cmd_solve(const RunConfig& config, const CliOptions& options, std::ostream& out)
{
    if (config.solves.empty()) throw InputError("config: 'utility' or 'solves' is required for solve");
    const Pipeline p = run_pipeline(config);
    const auto& problem = p.instance.problem;

    json j;
    j["problem"] = p.instance.description;
    j["reference"] = to_json(to_user_facing(problem, p.instance.reference.levels()));
    j["slater"] = to_json(p.slater);
    if (p.reduced) j["kept_objectives"] = p.reduced->kept;
    json runs = json::array();
    for (std::size_t i = 0; i < p.runs.size(); ++i) {
        json r = to_json(p.runs[i].report, options.trace);
        r["utility"] = p.runs[i].label;
        r["solver"] = solver_json(config.solves[i].solver);
        r["objectives_all"] = to_json(p.runs[i].final_objectives);
        runs.push_back(std::move(r));
    }
    j["solves"] = runs;

    const auto dir = output_dir(config, options);
    write_file(dir / "solve_report.json", j.dump(2) + "\n");
    if (p.slater.kind == SlaterKind::ParetoRegion) {
        out << "every point of F is Pareto optimal; nothing to solve\n";
        return kExitPareto;
    }
    const std::string table = summary_table(p);
    write_file(dir / "solve_summary.txt", table);
    out << table;
    return kExitOk;
}

int cmd_frontier(const RunConfig& config, const CliOptions& options, std::ostream& out)
{
    SweepOptions sweep = config.sweep;
    if (options.jobs) sweep.jobs = *options.jobs;
    const Pipeline p = run_pipeline(config);
    const auto& problem = p.instance.problem;
    const auto cells = frontier_sweep(problem, p.instance.reference, sweep);

    const Index m = problem.num_objectives();
    const Index n = problem.dimension();
    std::ostringstream csv;
    csv << "level_index,lambda_index";
    for (Index j = 0; j < m; ++j) csv << ",f" << j + 1;
    for (Index i = 0; i < n; ++i) csv << ",x" << i + 1;
    csv << ",dominates_reference\n";
    std::size_t rows = 0;
    for (const auto& c : cells) {
        if (!c.nondominated) continue;
        ++rows;
        csv << c.level_index << ',' << c.lambda_index;
        for (Index j = 0; j < m; ++j) csv << ',' << format_double(c.objectives[j]);
        for (Index i = 0; i < n; ++i) csv << ',' << format_double(c.x[i]);
        csv << ',' << (c.dominates_reference ? 1 : 0) << '\n';
    }

    json manifest;
    manifest["problem"] = p.instance.description;
    manifest["reference"] = to_json(to_user_facing(problem, p.instance.reference.levels()));
    manifest["slater"] = std::string(to_string(p.slater.kind));
    manifest["x0"] = p.x0 ? to_json(*p.x0) : json(nullptr);
    manifest["x0_objectives"] =
        p.x0 ? to_json(to_user_facing(problem, evaluate_objectives(problem, *p.x0))) : json(nullptr);
    json solves = json::array();
    for (const auto& run : p.runs) {
        solves.push_back({{"utility", run.label},
                          {"x", to_json(run.report.final_x)},
                          {"objectives", to_json(run.final_objectives)},
                          {"h", run.report.final_h},
                          {"termination", std::string(to_string(run.report.termination))}});
    }
    manifest["solves"] = solves;
    manifest["sweep"] = {{"n_levels", m == 3 ? sweep.n_levels : 1},
                         {"n_lambda", sweep.n_lambda},
                         {"penalty", sweep.penalty},
                         {"max_iterations", sweep.max_iterations},
                         {"tolerance", sweep.tolerance}};
    manifest["cells"] = cells.size();
    manifest["converged_cells"] = std::count_if(cells.begin(), cells.end(), [](const auto& c) { return c.converged; });
    manifest["rows"] = rows;
    manifest["csv"] = "frontier.csv";

    const auto dir = output_dir(config, options);
    write_file(dir / "frontier.csv", csv.str());
    write_file(dir / "frontier_manifest.json", manifest.dump(2) + "\n");
    out << "frontier: " << rows << " non-dominated points of " << cells.size() << " cells\n";
    return kExitOk;
}

int run_command(Command command, const CliOptions& options, std::ostream& out, std::ostream& err)
{
    try {
        RunConfig config = load_config(options.config);
        if (options.seed) config.seed = *options.seed;
        switch (command) {
        case Command::Slater: return cmd_slater(config, options, out);
        case Command::Solve: return cmd_solve(config, options, out);
        case Command::Frontier: return cmd_frontier(config, options, out);
        case Command::Verify: return cmd_verify(config, options, out);
        }
    } catch (const ConfigurationError& e) {
        err << "configuration error: " << e.what() << '\n';
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
    } catch (const std::exception& e) {
        err << "unexpected error: " << e.what() << '\n';
    }
    return kExitError;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Utility-function scalarization of multi-objective problems"};
    app.require_subcommand(1);
    CliOptions options;
    Command command = Command::Slater;
    int jobs = 0;
    std::uint64_t seed = 0;
    std::string out_dir;

    auto add = [&](const char* name, const char* help, Command c) {
        CLI::App* sub = app.add_subcommand(name, help);
        sub->add_option("--config", options.config, "JSON run configuration")->required();
        sub->add_flag("--trace", options.trace, "include the iteration trace in reports");
        sub->add_option("--jobs", jobs, "worker threads for the frontier sweep")->check(CLI::PositiveNumber);
        sub->add_option("--seed", seed, "overrides the config seed");
        sub->add_option("--out", out_dir, "output directory");
        sub->callback([&command, c] { command = c; });
        return sub;
    };
    CLI::App* slater = add("slater", "find a Slater point and classify the reference region", Command::Slater);
    CLI::App* solve = add("solve", "run the ascent method for each configured utility", Command::Solve);
    CLI::App* frontier = add("frontier", "sweep an approximation of the efficient frontier", Command::Frontier);
    CLI::App* verify = add("verify", "run the property checks", Command::Verify);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        std::ostringstream o;
        std::ostringstream e2;
        const int code = app.exit(e, o, e2);
        out << o.str();
        err << e2.str();
        return code == 0 ? kExitOk : kExitError;
    }
    for (CLI::App* sub : {slater, solve, frontier, verify}) {
        if (!sub->parsed()) continue;
        if (sub->count("--jobs") != 0U) options.jobs = jobs;
        if (sub->count("--seed") != 0U) options.seed = seed;
        if (sub->count("--out") != 0U) options.out = out_dir;
    }
    return run_command(command, options, out, err);
}

}  // namespace utilscal::cli
