#pragma once

#include "config.hpp"

#include "utilscal/slater.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace utilscal::cli {

enum class Command { Slater, Solve, Frontier, Verify };

struct CliOptions {
    std::filesystem::path config;
    bool trace = false;
    std::optional<int> jobs;
    std::optional<std::uint64_t> seed;
    std::optional<std::filesystem::path> out;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitWeakPareto = 2;
inline constexpr int kExitPareto = 3;

/// Parses argv with CLI11 and dispatches. Never throws.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Runs one command. Library errors become exit code 1 with a message on err.
int run_command(Command command, const CliOptions& options, std::ostream& out, std::ostream& err);

int cmd_slater(const RunConfig& config, const CliOptions& options, std::ostream& out);
int cmd_solve(const RunConfig& config, const CliOptions& options, std::ostream& out);
int cmd_frontier(const RunConfig& config, const CliOptions& options, std::ostream& out);
int cmd_verify(const RunConfig& config, const CliOptions& options, std::ostream& out);

// Shared by solve and frontier.
struct UtilityRun {
    std::string label;
    SolveReport report;
    Vector final_objectives;  // all original objectives, user signs
};

struct Pipeline {
    Instance instance;
    SlaterOutcome slater;
    std::optional<ReducedProblem> reduced;
    std::optional<Vector> x0;
    std::vector<UtilityRun> runs;
};

/// Slater search, optional reduction of pinned objectives, then one solve per
/// configured utility. Solves are skipped when F is a Pareto region.
[[nodiscard]] Pipeline run_pipeline(const RunConfig& config);

/// Shortest round-trip decimal form.
[[nodiscard]] std::string format_double(double v);

}  // namespace utilscal::cli
