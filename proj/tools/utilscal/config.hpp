#pragma once

#include "utilscal/pareto.hpp"
#include "utilscal/portfolio.hpp"
#include "utilscal/slater.hpp"
#include "utilscal/solver.hpp"
#include "utilscal/utility.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace utilscal::cli {

struct ToySource {
    std::string variant;  // "segment" or "weak_pareto"
};

struct SyntheticSource {
    Index n = 28;
    Index periods = 504;
    std::optional<std::uint64_t> seed;
};

struct FileSource {
    std::filesystem::path series;
    std::filesystem::path esg;
    SeriesKind kind = SeriesKind::Prices;
};

using ProblemSource = std::variant<ToySource, SyntheticSource, FileSource>;

struct EquallyWeighted {};
struct FromPoint {
    Vector x;
};
struct ExplicitLevels {
    Vector a;  // user-facing signs
    std::optional<Vector> start;
};

using ReferenceSpec = std::variant<EquallyWeighted, FromPoint, ExplicitLevels>;

struct SolveSpec {
    UtilityFunction utility;
    SolverConfig solver;
};

struct VerifySpec {
    std::vector<std::string> checks;
    int samples = 200;
    int resolution = 101;
    std::vector<double> p_values{1.0, 2.0, 4.0};
    bool inject_gradient_fault = false;
};

struct RunConfig {
    ProblemSource problem;
    ReferenceSpec reference;
    std::vector<SolveSpec> solves;
    int slater_budget = kDefaultSlaterBudget;
    SweepOptions sweep;
    VerifySpec verify;
    std::filesystem::path output_dir = ".";
    std::uint64_t seed = 0;
};

/// Validates the document against the schema, rejecting unknown keys.
/// Relative data paths resolve against `base_dir`.
[[nodiscard]] RunConfig parse_config(const nlohmann::json& doc, const std::filesystem::path& base_dir);
[[nodiscard]] RunConfig load_config(const std::filesystem::path& path);

[[nodiscard]] UtilityFunction parse_utility(const nlohmann::json& spec);

/// The instantiated problem, reference and starting point.
struct Instance {
    MultiObjectiveProblem problem;
    ReferencePoint reference;
    Vector start;  // a point of F = {x in K : f(x) <= a}
    std::string description;
};

[[nodiscard]] Instance build_instance(const RunConfig& config);

}  // namespace utilscal::cli
