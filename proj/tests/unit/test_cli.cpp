#include "commands.hpp"
#include "config.hpp"

#include "utilscal/errors.hpp"
#include "utilscal/pareto.hpp"

#include <gtest/gtest.h>
#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

using namespace utilscal;
using namespace utilscal::cli;
using nlohmann::json;

namespace {

namespace fs = std::filesystem;

class Workspace {
public:
    explicit Workspace(const std::string& name) : dir_(fs::temp_directory_path() / ("utilscal_cli_" + name))
    {
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    ~Workspace() { fs::remove_all(dir_); }
    Workspace(const Workspace&) = delete;
    Workspace& operator=(const Workspace&) = delete;

    [[nodiscard]] fs::path write(const std::string& file, const json& doc) const
    {
        const fs::path p = dir_ / file;
        std::ofstream(p) << doc.dump(2);
        return p;
    }
    [[nodiscard]] const fs::path& dir() const { return dir_; }

private:
    fs::path dir_;
};

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args)
{
    args.insert(args.begin(), "utilscal");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out;
    std::ostringstream err;
    const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p)
{
    std::ifstream f(p, std::ios::binary);
    std::ostringstream s;
    s << f.rdbuf();
    return s.str();
}

json toy(double level)
{
    return {{"problem", {{"type", "toy"}, {"variant", "segment"}}},
            {"reference", {{"explicit_a", {level, level}}}},
            {"utility", {{"family", "cobb_douglas"}, {"alpha", {0.5, 0.5}}}},
            {"sweep", {{"n_levels", 5}, {"n_lambda", 11}}}};
}

const fs::path kConfigs = UTILSCAL_CONFIG_DIR;

}  // namespace

TEST(Config, ParsesShippedConfigs)
{
    for (const char* name : {"toy_segment.json", "toy_pareto.json", "toy_weak_pareto.json", "synthetic_n28.json",
                             "synthetic_n91.json"}) {
        EXPECT_NO_THROW((void)load_config(kConfigs / name)) << name;
    }
    const RunConfig c = load_config(kConfigs / "synthetic_n28.json");
    ASSERT_EQ(c.solves.size(), 2U);
    EXPECT_EQ(c.solves[0].solver.alpha_base, 1.0);
    EXPECT_EQ(c.solves[1].solver.alpha_base, 50.0);
    EXPECT_EQ(c.solves[1].utility.label(), "ces(rho=-0.5,kappa=1)");
    EXPECT_TRUE(std::holds_alternative<EquallyWeighted>(c.reference));
    EXPECT_EQ(c.output_dir, kConfigs / "out/synthetic_n28");
}

TEST(Config, RejectsUnknownKeys)
{
    json doc = toy(0.5);
    doc["utilty"] = json::object();
    EXPECT_THROW((void)parse_config(doc, "."), InputError);
    doc = toy(0.5);
    doc["utility"]["alfa"] = {1, 1};
    EXPECT_THROW((void)parse_config(doc, "."), InputError);
    doc = toy(0.5);
    doc["sweep"]["lambdas"] = 3;
    EXPECT_THROW((void)parse_config(doc, "."), InputError);
}

TEST(Config, RejectsBadValues)
{
    json doc = toy(0.5);
    doc["utility"]["family"] = "quadratic";
    EXPECT_THROW((void)parse_config(doc, "."), Error);
    doc = toy(0.5);
    doc["problem"]["variant"] = "circle";
    EXPECT_THROW((void)parse_config(doc, "."), Error);
    doc = toy(0.5);
    doc["solver"] = {{"gamma", 2.0}};
    EXPECT_THROW((void)parse_config(doc, "."), ConfigurationError);
    doc = toy(0.5);
    doc.erase("problem");
    EXPECT_THROW((void)parse_config(doc, "."), Error);
}

TEST(Cli, SlaterExitCodes)
{
    Workspace ws("slater");
    const auto ok = run({"slater", "--config", ws.write("a.json", toy(0.5)).string()});
    EXPECT_EQ(ok.code, kExitOk);
    const json printed = json::parse(ok.out);
    EXPECT_EQ(printed.at("kind"), "slater_point");
    EXPECT_EQ(run({"slater", "--config", ws.write("b.json", toy(0.25)).string()}).code, kExitPareto);
    EXPECT_EQ(run({"slater", "--config", (kConfigs / "toy_weak_pareto.json").string()}).code, kExitWeakPareto);
    const auto missing = run({"slater", "--config", (ws.dir() / "nope.json").string()});
    EXPECT_EQ(missing.code, kExitError);
    EXPECT_FALSE(missing.err.empty());
}

TEST(Cli, UsageErrors)
{
    EXPECT_EQ(run({}).code, kExitError);
    EXPECT_EQ(run({"solve"}).code, kExitError);
    EXPECT_EQ(run({"bogus", "--config", "x"}).code, kExitError);
    EXPECT_EQ(run({"--help"}).code, kExitOk);
}

TEST(Cli, SolveWritesReportAndTable)
{
    Workspace ws("solve");
    const auto cfg = ws.write("a.json", toy(0.5));
    const auto out_dir = ws.dir() / "out";
    const auto r = run({"solve", "--config", cfg.string(), "--out", out_dir.string(), "--trace"});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    EXPECT_NE(r.out.find("h(x*)"), std::string::npos);
    const json report = json::parse(slurp(out_dir / "solve_report.json"));
    const auto& s = report.at("solves").at(0);
    EXPECT_EQ(s.at("termination"), "stationary");
    EXPECT_NEAR(s.at("final_x").at(0).get<double>(), 0.5, 1e-4);
    EXPECT_TRUE(s.contains("trace"));
    EXPECT_EQ(slurp(out_dir / "solve_summary.txt"), r.out);
}

TEST(Cli, SolveExitCodes)
{
    Workspace ws("solve_codes");
    EXPECT_EQ(run({"solve", "--config", ws.write("p.json", toy(0.25)).string(), "--out", ws.dir().string()}).code,
              kExitPareto);
    json lin = toy(0.5);
    lin["utility"] = {{"family", "linear"}, {"alpha", {1, 1}}};
    const auto r = run({"solve", "--config", ws.write("l.json", lin).string(), "--out", ws.dir().string()});
    EXPECT_EQ(r.code, kExitError);
    EXPECT_NE(r.err.find("configuration error"), std::string::npos) << r.err;
    json leontief = toy(0.5);
    leontief["utility"] = {{"family", "leontief"}, {"alpha", {1, 1}}};
    EXPECT_EQ(run({"solve", "--config", ws.write("m.json", leontief).string(), "--out", ws.dir().string()}).code,
              kExitError);
}

TEST(Cli, SolveOnWeakParetoRegionUsesReducedProblem)
{
    Workspace ws("weak");
    const auto r = run({"solve", "--config", (kConfigs / "toy_weak_pareto.json").string(), "--out", ws.dir().string()});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    const json report = json::parse(slurp(ws.dir() / "solve_report.json"));
    EXPECT_EQ(report.at("kept_objectives"), json({0, 1}));
    for (const auto& s : report.at("solves")) {
        EXPECT_EQ(s.at("termination"), "stationary");
        // x2 is pinned to 0 by f3 <= 0; x1 balances f1 and f2 at 0.5.
        EXPECT_NEAR(s.at("final_x").at(0).get<double>(), 0.5, 1e-4);
        EXPECT_NEAR(s.at("final_x").at(1).get<double>(), 0.0, 1e-9);
    }
}

TEST(Cli, FrontierOnToy)
{
    Workspace ws("frontier");
    const auto cfg = ws.write("a.json", toy(0.5));
    const auto r = run({"frontier", "--config", cfg.string(), "--out", ws.dir().string()});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    std::istringstream csv(slurp(ws.dir() / "frontier.csv"));
    std::string line;
    std::getline(csv, line);
    EXPECT_EQ(line, "level_index,lambda_index,f1,f2,x1,dominates_reference");
    int rows = 0;
    const Vector a{{0.5, 0.5}};
    while (std::getline(csv, line)) {
        ++rows;
        std::vector<double> cells;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) cells.push_back(std::stod(cell));
        ASSERT_EQ(cells.size(), 6U);
        const Vector f{{cells[2], cells[3]}};
        EXPECT_EQ(cells[5] == 1.0, dominates(f, a));
    }
    EXPECT_GT(rows, 0);
    EXPECT_LE(rows, 55);
    const json manifest = json::parse(slurp(ws.dir() / "frontier_manifest.json"));
    EXPECT_EQ(manifest.at("rows"), rows);
    EXPECT_EQ(manifest.at("reference"), json({0.5, 0.5}));
    EXPECT_EQ(manifest.at("solves").size(), 1U);
    EXPECT_TRUE(manifest.contains("x0"));
}

TEST(Cli, FrontierIsIndependentOfJobs)
{
    Workspace ws("frontier_jobs");
    const auto cfg = kConfigs / "toy_weak_pareto.json";
    json doc = json::parse(slurp(cfg));
    doc["reference"] = {{"explicit_a", {2.0, 2.0, 2.0}}};
    doc["sweep"] = {{"n_levels", 6}, {"n_lambda", 7}};
    const auto path = ws.write("w.json", doc);
    ASSERT_EQ(run({"frontier", "--config", path.string(), "--out", (ws.dir() / "j1").string(), "--jobs", "1"}).code,
              kExitOk);
    ASSERT_EQ(run({"frontier", "--config", path.string(), "--out", (ws.dir() / "j3").string(), "--jobs", "3"}).code,
              kExitOk);
    EXPECT_EQ(slurp(ws.dir() / "j1" / "frontier.csv"), slurp(ws.dir() / "j3" / "frontier.csv"));
}

TEST(Cli, VerifyPassesAndCatchesInjectedFault)
{
    Workspace ws("verify");
    json doc = toy(0.5);
    doc["verify"] = {{"samples", 50}, {"resolution", 201}};
    const auto ok = run({"verify", "--config", ws.write("a.json", doc).string()});
    EXPECT_EQ(ok.code, kExitOk) << ok.out;
    EXPECT_TRUE(json::parse(ok.out).at("passed").get<bool>());

    doc["verify"]["inject_gradient_fault"] = true;
    const auto bad = run({"verify", "--config", ws.write("b.json", doc).string()});
    EXPECT_EQ(bad.code, kExitError);
    const json res = json::parse(bad.out);
    EXPECT_FALSE(res.at("passed").get<bool>());
    bool gradient_failed = false;
    for (const auto& c : res.at("checks")) gradient_failed |= c.at("name") == "gradient" && c.at("status") == "fail";
    EXPECT_TRUE(gradient_failed);

    doc["verify"] = {{"checks", {"compromise"}}, {"p", {2}}, {"resolution", 201}};
    const auto comp = run({"verify", "--config", ws.write("c.json", doc).string()});
    EXPECT_EQ(comp.code, kExitOk);
    EXPECT_EQ(json::parse(comp.out).at("checks").size(), 1U);
}

TEST(Binary, OutputsAreByteIdenticalAcrossRuns)
{
    Workspace ws("binary");
    const std::string bin = UTILSCAL_BINARY;
    const std::string cfg = (kConfigs / "synthetic_n28.json").string();
    for (const char* sub : {"a", "b"}) {
        const std::string cmd = bin + " solve --config " + cfg + " --seed 42 --out " + (ws.dir() / sub).string() +
                                " > /dev/null";
        ASSERT_EQ(std::system(cmd.c_str()), 0) << cmd;
    }
    EXPECT_EQ(slurp(ws.dir() / "a" / "solve_report.json"), slurp(ws.dir() / "b" / "solve_report.json"));
    EXPECT_EQ(slurp(ws.dir() / "a" / "solve_summary.txt"), slurp(ws.dir() / "b" / "solve_summary.txt"));
}

TEST(Binary, ExitCodesAndLogLevel)
{
    const std::string bin = UTILSCAL_BINARY;
    auto code = [](const std::string& cmd) {
        const int status = std::system(cmd.c_str());
        return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    };
    EXPECT_EQ(code(bin + " slater --config " + (kConfigs / "toy_pareto.json").string() + " > /dev/null"), 3);
    EXPECT_EQ(code(bin + " slater --config /nonexistent.json 2> /dev/null"), 1);
    EXPECT_EQ(code("UTILSCAL_LOG=debug " + bin + " slater --config " + (kConfigs / "toy_segment.json").string() +
                   " > /dev/null 2>&1"),
              0);
}
