#include "utilscal/pareto.hpp"

#include "utilscal/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace utilscal {

DominationVerdict compare(const Vector& fa, const Vector& fb, double tol)
{
    if (fa.size() != fb.size()) throw InputError("compared objective vectors differ in length");
    bool all_close = true;
    bool a_all_strict = true;
    bool b_all_strict = true;
    bool a_weak = true;  // fa <= fb + tol
    bool b_weak = true;
    bool a_some = false;  // some fa_j < fb_j - tol
    bool b_some = false;
    for (Index j = 0; j < fa.size(); ++j) {
        const double x = fa[j];
        const double y = fb[j];
        if (std::abs(x - y) > tol) all_close = false;
        const bool a_better = x < y - tol;
        const bool b_better = y < x - tol;
        a_all_strict = a_all_strict && a_better;
        b_all_strict = b_all_strict && b_better;
        a_weak = a_weak && x <= y + tol;
        b_weak = b_weak && y <= x + tol;
        a_some = a_some || a_better;
        b_some = b_some || b_better;
    }
    Relation r = Relation::Incomparable;
    if (all_close) r = Relation::Equal;
    else if (a_all_strict) r = Relation::StrictlyDominates;
    else if (b_all_strict) r = Relation::IsStrictlyDominated;
    else if (a_weak && a_some) r = Relation::Dominates;
    else if (b_weak && b_some) r = Relation::IsDominated;
    return {r, tol};
}

bool dominates(const Vector& fa, const Vector& fb, double tol)
{
    const Relation r = compare(fa, fb, tol).relation;
    return r == Relation::StrictlyDominates || r == Relation::Dominates;
}

std::string_view to_string(Relation r)
{
    switch (r) {
    case Relation::StrictlyDominates: return "strictly_dominates";
    case Relation::Dominates: return "dominates";
    case Relation::Equal: return "equal";
    case Relation::Incomparable: return "incomparable";
    case Relation::IsDominated: return "is_dominated";
    case Relation::IsStrictlyDominated: return "is_strictly_dominated";
    }
    return "unknown";
}

std::vector<std::size_t> nondominated_indices(const std::vector<Vector>& points, double tol)
{
    std::vector<std::size_t> order(points.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t l, std::size_t r) {
        const Vector& a = points[l];
        const Vector& b = points[r];
        return std::lexicographical_compare(a.data(), a.data() + a.size(), b.data(), b.data() + b.size());
    });

    std::vector<std::size_t> archive;
    for (std::size_t idx : order) {
        const Vector& candidate = points[idx];
        bool dominated = false;
        for (std::size_t kept : archive) {
            if (dominates(points[kept], candidate, tol)) {
                dominated = true;
                break;
            }
        }
        if (dominated) continue;
        std::erase_if(archive, [&](std::size_t kept) { return dominates(candidate, points[kept], tol); });
        archive.push_back(idx);
    }
    std::sort(archive.begin(), archive.end());
    return archive;
}

namespace {

void check_resolution(int resolution)
{
    if (resolution < 2 || resolution > kMaxGridResolution) {
        std::ostringstream os;
        os << "grid resolution must lie in [2, " << kMaxGridResolution << "], got " << resolution;
        throw InputError(os.str());
    }
}

void barycentric(Index n, int steps, Index pos, int remaining, Vector& current, std::vector<Vector>& out)
{
    if (pos == n - 1) {
        current[pos] = static_cast<double>(remaining) / steps;
        out.push_back(current);
        return;
    }
    for (int k = 0; k <= remaining; ++k) {
        current[pos] = static_cast<double>(k) / steps;
        barycentric(n, steps, pos + 1, remaining - k, current, out);
    }
}

}  // namespace

std::vector<Vector> enumerate_grid(const FeasibleSet& set, int resolution)
{
    check_resolution(resolution);
    const Index n = set.dimension();
    if (n > 3) throw InputError("grid enumeration is limited to n <= 3");

    std::vector<Vector> out;
    switch (set.kind()) {
    case FeasibleSet::Kind::BoxSimplex: {
        Vector current(n);
        barycentric(n, resolution - 1, 0, resolution - 1, current, out);
        break;
    }
    case FeasibleSet::Kind::Box: {
        const Vector& lo = set.lower();
        const Vector& hi = set.upper();
        std::vector<int> counter(static_cast<std::size_t>(n), 0);
        const double denom = resolution - 1;
        for (;;) {
            Vector x(n);
            for (Index i = 0; i < n; ++i) {
                x[i] = lo[i] + (hi[i] - lo[i]) * (counter[static_cast<std::size_t>(i)] / denom);
            }
            out.push_back(std::move(x));
            Index i = 0;
            for (; i < n; ++i) {
                auto& c = counter[static_cast<std::size_t>(i)];
                if (++c < resolution) break;
                c = 0;
            }
            if (i == n) break;
        }
        break;
    }
    case FeasibleSet::Kind::Custom: {
        if (!set.enclosing()) throw InputError("custom feasible set has no enclosing set to enumerate");
        for (Vector& x : enumerate_grid(*set.enclosing(), resolution)) {
            if (set.contains(x)) out.push_back(std::move(x));
        }
        break;
    }
    }
    return out;
}

std::vector<GridPoint> evaluate_grid(std::span<const ObjectiveFunction> objectives, const FeasibleSet& set,
                                     int resolution)
{
    if (objectives.empty()) throw InputError("need at least one objective");
    std::vector<GridPoint> out;
    for (Vector& x : enumerate_grid(set, resolution)) {
        Vector f(static_cast<Index>(objectives.size()));
        for (std::size_t j = 0; j < objectives.size(); ++j) f[static_cast<Index>(j)] = objectives[j].value(x);
        out.push_back({std::move(x), std::move(f)});
    }
    return out;
}

std::vector<GridPoint> grid_oracle(std::span<const ObjectiveFunction> objectives, const FeasibleSet& set,
                                   int resolution, double tol)
{
    std::vector<GridPoint> grid = evaluate_grid(objectives, set, resolution);
    std::vector<Vector> values;
    values.reserve(grid.size());
    for (const auto& g : grid) values.push_back(g.f);
    std::vector<GridPoint> out;
    for (std::size_t idx : nondominated_indices(values, tol)) out.push_back(std::move(grid[idx]));
    return out;
}

std::vector<GridPoint> grid_oracle(const MultiObjectiveProblem& problem, int resolution, double tol)
{
    return grid_oracle(problem.objectives(), problem.feasible_set(), resolution, tol);
}

}  // namespace utilscal
