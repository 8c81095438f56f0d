#include "utilscal/portfolio.hpp"

#include "utilscal/errors.hpp"

#include <Eigen/Eigenvalues>

#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <numbers>
#include <random>
#include <sstream>

namespace utilscal {

namespace {

std::vector<std::string> split_csv_line(const std::string& line)
{
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream in(line);
    while (std::getline(in, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
}

std::string trim(std::string s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

[[noreturn]] void parse_error(const std::string& source, std::size_t line, const std::string& what)
{
    std::ostringstream os;
    os << source << ":" << line << ": " << what;
    throw InputError(os.str());
}

double parse_number(const std::string& raw, const std::string& source, std::size_t line, std::size_t column)
{
    const std::string cell = trim(raw);
    double value = 0.0;
    const char* end = cell.data() + cell.size();
    const auto [ptr, ec] = std::from_chars(cell.data(), end, value);
    if (cell.empty() || ec != std::errc() || ptr != end || !std::isfinite(value)) {
        std::ostringstream os;
        os << "column " << column << ": '" << cell << "' is not a finite number";
        parse_error(source, line, os.str());
    }
    return value;
}

bool blank(const std::string& line)
{
    return trim(line).empty();
}

}  // namespace

MarketData load_returns_csv(std::istream& series, SeriesKind kind, std::istream& esg, const std::string& source)
{
    MarketData data;
    std::string line;
    std::size_t line_no = 0;

    while (std::getline(series, line)) {
        ++line_no;
        if (!blank(line)) break;
    }
    if (blank(line)) parse_error(source, line_no, "missing header row");
    const auto header = split_csv_line(line);
    if (header.size() < 2) parse_error(source, line_no, "header needs a date column and at least one asset");
    for (std::size_t c = 1; c < header.size(); ++c) {
        std::string name = trim(header[c]);
        if (name.empty()) parse_error(source, line_no, "empty asset name in column " + std::to_string(c + 1));
        data.asset_names.push_back(std::move(name));
    }
    const std::size_t n = data.asset_names.size();

    std::vector<std::vector<double>> rows;
    while (std::getline(series, line)) {
        ++line_no;
        if (blank(line)) continue;
        const auto cells = split_csv_line(line);
        if (cells.size() != n + 1) {
            std::ostringstream os;
            os << "expected " << n + 1 << " cells, found " << cells.size();
            parse_error(source, line_no, os.str());
        }
        std::vector<double> row(n);
        for (std::size_t c = 0; c < n; ++c) row[c] = parse_number(cells[c + 1], source, line_no, c + 2);
        rows.push_back(std::move(row));
    }

    const std::size_t levels = rows.size();
    if (kind == SeriesKind::Prices) {
        if (levels < 3) throw InputError(source + ": need at least 3 price rows for 2 return periods");
        data.returns.resize(static_cast<Index>(levels - 1), static_cast<Index>(n));
        for (std::size_t t = 1; t < levels; ++t) {
            for (std::size_t c = 0; c < n; ++c) {
                const double prev = rows[t - 1][c];
                if (prev == 0.0) throw InputError(source + ": zero price for " + data.asset_names[c]);
                data.returns(static_cast<Index>(t - 1), static_cast<Index>(c)) = rows[t][c] / prev - 1.0;
            }
        }
    } else {
        if (levels < 2) throw InputError(source + ": need at least 2 return rows");
        data.returns.resize(static_cast<Index>(levels), static_cast<Index>(n));
        for (std::size_t t = 0; t < levels; ++t) {
            for (std::size_t c = 0; c < n; ++c) data.returns(static_cast<Index>(t), static_cast<Index>(c)) = rows[t][c];
        }
    }

    std::map<std::string, std::pair<double, int>> scores;
    std::size_t esg_line = 0;
    const std::string esg_source = source + " (esg)";
    while (std::getline(esg, line)) {
        ++esg_line;
        if (blank(line)) continue;
        const auto cells = split_csv_line(line);
        if (cells.size() != 2) parse_error(esg_source, esg_line, "expected 'asset,score'");
        const std::string asset = trim(cells[0]);
        if (esg_line == 1 && asset == "asset") continue;
        auto& acc = scores[asset];
        acc.first += parse_number(cells[1], esg_source, esg_line, 2);
        acc.second += 1;
    }
    data.esg.resize(static_cast<Index>(n));
    for (std::size_t c = 0; c < n; ++c) {
        const auto it = scores.find(data.asset_names[c]);
        if (it == scores.end()) throw InputError(esg_source + ": no ESG score for asset " + data.asset_names[c]);
        data.esg[static_cast<Index>(c)] = it->second.first / it->second.second;
    }
    return data;
}

MarketData load_returns_csv(const std::filesystem::path& series, SeriesKind kind, const std::filesystem::path& esg)
{
    std::ifstream s(series);
    if (!s) throw InputError("cannot open " + series.string());
    std::ifstream e(esg);
    if (!e) throw InputError("cannot open " + esg.string());
    return load_returns_csv(s, kind, e, series.string());
}

void write_returns_csv(const MarketData& data, const std::filesystem::path& series, const std::filesystem::path& esg)
{
    std::ofstream s(series);
    if (!s) throw InputError("cannot write " + series.string());
    s << std::setprecision(17) << "date";
    for (const auto& name : data.asset_names) s << ',' << name;
    s << '\n';
    for (Index t = 0; t < data.returns.rows(); ++t) {
        s << t;
        for (Index c = 0; c < data.returns.cols(); ++c) s << ',' << data.returns(t, c);
        s << '\n';
    }
    std::ofstream e(esg);
    if (!e) throw InputError("cannot write " + esg.string());
    e << std::setprecision(17) << "asset,score\n";
    for (std::size_t c = 0; c < data.asset_names.size(); ++c) {
        e << data.asset_names[c] << ',' << data.esg[static_cast<Index>(c)] << '\n';
    }
}

Moments estimate_moments(const MarketData& data)
{
    const Index periods = data.returns.rows();
    if (periods < 2) throw InputError("moment estimation needs at least 2 periods");
    Moments m;
    m.mu = data.returns.colwise().mean().transpose();
    const Matrix centered = data.returns.rowwise() - m.mu.transpose();
    Matrix sigma = (centered.transpose() * centered) / static_cast<double>(periods - 1);
    sigma = 0.5 * (sigma + sigma.transpose()).eval();

    Eigen::SelfAdjointEigenSolver<Matrix> eig(sigma);
    if (eig.eigenvalues().minCoeff() < 0.0) {
        const Vector clipped = eig.eigenvalues().cwiseMax(0.0);
        sigma = eig.eigenvectors() * clipped.asDiagonal() * eig.eigenvectors().transpose();
        sigma = 0.5 * (sigma + sigma.transpose()).eval();
    }
    m.sigma = std::move(sigma);
    return m;
}

PortfolioProblem build_portfolio_problem(Vector mu, Matrix sigma, Vector esg)
{
    const Index n = mu.size();
    if (n < 1) throw InputError("portfolio needs at least one asset");
    if (sigma.rows() != n || sigma.cols() != n || esg.size() != n) {
        throw InputError("mu, sigma and esg dimensions disagree");
    }
    if ((sigma - sigma.transpose()).lpNorm<Eigen::Infinity>() > 1e-12) throw InputError("sigma is not symmetric");
    if (Eigen::SelfAdjointEigenSolver<Matrix>(sigma, Eigen::EigenvaluesOnly).eigenvalues().minCoeff() < -1e-8) {
        throw InputError("sigma is not positive semidefinite");
    }

    auto s = std::make_shared<const Matrix>(sigma);
    auto r = std::make_shared<const Vector>(mu);
    auto e = std::make_shared<const Vector>(esg);
    std::vector<ObjectiveFunction> objectives;
    objectives.emplace_back(
        "risk", [s](const Vector& x) { return 0.5 * x.dot(*s * x); }, [s](const Vector& x) { return Vector(*s * x); });
    objectives.emplace_back(
        "return", [r](const Vector& x) { return r->dot(x); }, [r](const Vector&) { return *r; }, Sense::Maximize);
    objectives.emplace_back(
        "esg", [e](const Vector& x) { return e->dot(x); }, [e](const Vector&) { return *e; }, Sense::Maximize);

    return PortfolioProblem{std::move(mu), std::move(sigma), std::move(esg),
                            MultiObjectiveProblem(std::move(objectives), FeasibleSet::box_simplex(n))};
}

namespace {

// Uniform in [0, 1) from the top 53 bits; std::uniform_real_distribution is
// implementation-defined, this is not.
double uniform(std::mt19937_64& rng)
{
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

class Normal {
public:
    explicit Normal(std::mt19937_64& rng) : rng_(rng) {}

    double operator()()
    {
        if (cached_) {
            cached_ = false;
            return spare_;
        }
        const double u1 = 1.0 - uniform(rng_);  // (0, 1]
        const double u2 = uniform(rng_);
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * std::numbers::pi * u2;
        spare_ = radius * std::sin(angle);
        cached_ = true;
        return radius * std::cos(angle);
    }

private:
    std::mt19937_64& rng_;
    double spare_ = 0.0;
    bool cached_ = false;
};

}  // namespace

MarketData generate_synthetic_market(Index n, Index periods, std::uint64_t seed)
{
    if (n < 1 || periods < 2) throw InputError("synthetic market needs n >= 1 and T >= 2");
    constexpr Index kFactors = 3;
    constexpr double kFactorVol[kFactors] = {0.010, 0.006, 0.004};

    std::mt19937_64 rng(seed);
    Normal normal(rng);

    MarketData data;
    Matrix loadings(n, kFactors);
    Vector drift(n);
    Vector idio(n);
    for (Index i = 0; i < n; ++i) {
        std::ostringstream name;
        name << "A" << std::setw(3) << std::setfill('0') << i + 1;
        data.asset_names.push_back(name.str());
        loadings(i, 0) = 0.5 + uniform(rng);
        for (Index k = 1; k < kFactors; ++k) loadings(i, k) = 2.0 * uniform(rng) - 1.0;
        drift[i] = 0.0001 + 0.0009 * uniform(rng);
        idio[i] = 0.005 + 0.015 * uniform(rng);
    }
    data.esg.resize(n);
    for (Index i = 0; i < n; ++i) data.esg[i] = 20.0 + 75.0 * uniform(rng);

    data.returns.resize(periods, n);
    Vector factor(kFactors);
    for (Index t = 0; t < periods; ++t) {
        for (Index k = 0; k < kFactors; ++k) factor[k] = kFactorVol[k] * normal();
        for (Index i = 0; i < n; ++i) data.returns(t, i) = drift[i] + loadings.row(i).dot(factor) + idio[i] * normal();
    }
    return data;
}

}  // namespace utilscal
