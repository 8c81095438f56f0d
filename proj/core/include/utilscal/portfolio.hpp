#pragma once

#include "utilscal/problem.hpp"

#include <cstdint>
#include <filesystem>
#include <istream>
#include <string>
#include <vector>

namespace utilscal {

struct MarketData {
    std::vector<std::string> asset_names;
    Matrix returns;  // T x n, one row per period
    Vector esg;
};

enum class SeriesKind { Prices, Returns };

/// Reads `date,ASSET1,...` rows; prices become simple returns. ESG scores come
/// from a separate `asset,score` file, averaged when an asset appears more
/// than once. Parse errors name the source, line and column.
[[nodiscard]] MarketData load_returns_csv(const std::filesystem::path& series, SeriesKind kind,
                                          const std::filesystem::path& esg);
[[nodiscard]] MarketData load_returns_csv(std::istream& series, SeriesKind kind, std::istream& esg,
                                          const std::string& source = "<stream>");

/// Writes `data` in the format read by load_returns_csv (kind = returns).
void write_returns_csv(const MarketData& data, const std::filesystem::path& series,
                       const std::filesystem::path& esg);

struct Moments {
    Vector mu;
    Matrix sigma;
};

/// Column means and the 1/(T-1) sample covariance, symmetrized with negative
/// eigenvalues clipped to zero.
[[nodiscard]] Moments estimate_moments(const MarketData& data);

struct PortfolioProblem {
    Vector mu;
    Matrix sigma;
    Vector esg;
    MultiObjectiveProblem wrapped;
};

/// risk = x'Σx/2 (minimize), return = μ'x and esg = ESG'x (maximize), over the
/// box-constrained simplex.
[[nodiscard]] PortfolioProblem build_portfolio_problem(Vector mu, Matrix sigma, Vector esg);

/// Returns from a 3-factor model with N(0,1) draws from a Box-Muller transform
/// over mt19937_64, so the output is identical across platforms for a seed.
/// ESG scores are uniform in [20, 95].
[[nodiscard]] MarketData generate_synthetic_market(Index n, Index periods, std::uint64_t seed);

}  // namespace utilscal
