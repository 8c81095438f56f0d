#include "utilscal/errors.hpp"
#include "utilscal/pareto.hpp"
#include "utilscal/portfolio.hpp"
#include "utilscal/slater.hpp"

#include "fixtures.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace utilscal;

namespace {

Vector at(double x)
{
    return Vector::Constant(1, x);
}

ReferencePoint toy_ref(double level)
{
    return ReferencePoint::explicit_levels(Vector::Constant(2, level));
}

}  // namespace

TEST(StrictSubproblem, ToyWitnessIsStrict)
{
    const auto p = fixture::segment_toy();
    const auto a = toy_ref(0.5);
    for (Index j = 0; j < 2; ++j) {
        const auto x = strict_subproblem(p, a, j, at(0.5));
        ASSERT_TRUE(x.has_value());
        const Vector margins = slater_margins(p, a, *x);
        EXPECT_GE(margins.minCoeff(), 0.0);
        EXPECT_GT(margins[j], 1e-12);
        EXPECT_TRUE(p.feasible_set().contains(*x));
    }
}

TEST(StrictSubproblem, TightReferenceHasNoWitness)
{
    const auto p = fixture::segment_toy();
    const auto a = toy_ref(0.25);
    EXPECT_FALSE(strict_subproblem(p, a, 0, at(0.5)).has_value());
    EXPECT_FALSE(strict_subproblem(p, a, 1, at(0.5)).has_value());
}

TEST(StrictSubproblem, Errors)
{
    const auto p = fixture::segment_toy();
    EXPECT_THROW((void)strict_subproblem(p, toy_ref(0.5), 0), InputError);
    EXPECT_THROW((void)strict_subproblem(p, toy_ref(0.5), 2, at(0.5)), InputError);
    EXPECT_THROW((void)strict_subproblem(p, toy_ref(0.5), 0, at(0.9)), InputError);
    EXPECT_THROW((void)strict_subproblem(p, toy_ref(0.5), 0, at(1.5)), InputError);
    EXPECT_THROW((void)strict_subproblem(p, ReferencePoint::explicit_levels(Vector::Ones(3)), 0, at(0.5)), InputError);
}

TEST(StrictSubproblem, OriginPointOverload)
{
    // On the segment every x is efficient, so F = {x} and nothing is strict.
    const auto seg = fixture::segment_toy();
    EXPECT_FALSE(strict_subproblem(seg, reference_from_point(seg, at(0.2)), 1).has_value());

    const auto p = fixture::weak_toy();
    const auto a = reference_from_point(p, Vector{{0.5, 0.5}});
    for (Index j = 0; j < 3; ++j) {
        const auto x = strict_subproblem(p, a, j);
        ASSERT_TRUE(x.has_value());
        EXPECT_GT(slater_margins(p, a, *x)[j], 0.0);
    }
}

TEST(FindSlater, Classifications)
{
    const auto p = fixture::segment_toy();
    const auto loose = find_slater(p, toy_ref(0.5), at(0.5));
    EXPECT_EQ(loose.kind, SlaterKind::SlaterPoint);
    ASSERT_TRUE(loose.point.has_value());
    EXPECT_TRUE(is_slater_point(p, toy_ref(0.5), *loose.point));
    EXPECT_TRUE(loose.pinned.empty());

    const auto tight = find_slater(p, toy_ref(0.25), at(0.5));
    EXPECT_EQ(tight.kind, SlaterKind::ParetoRegion);
    EXPECT_FALSE(tight.point.has_value());
    EXPECT_EQ(tight.pinned, (std::vector<Index>{0, 1}));

    const auto w = fixture::weak_toy();
    const auto wa = ReferencePoint::explicit_levels(Vector{{0.09, 0.09, 0.0}});
    const auto weak = find_slater(w, wa, Vector{{0.5, 0.0}});
    EXPECT_EQ(weak.kind, SlaterKind::WeakParetoRegion);
    EXPECT_EQ(weak.pinned, (std::vector<Index>{2}));
    EXPECT_TRUE(weak.witnesses[0].has_value());
    EXPECT_TRUE(weak.witnesses[1].has_value());
    EXPECT_FALSE(weak.witnesses[2].has_value());
}

TEST(FindSlater, ReferenceFromInteriorPointIsSlaterOnSyntheticMarket)
{
    const auto data = generate_synthetic_market(28, 504, 42);
    const auto m = estimate_moments(data);
    const auto pp = build_portfolio_problem(m.mu, m.sigma, data.esg);
    const Vector xbar = pp.wrapped.feasible_set().center();
    const auto a = reference_from_point(pp.wrapped, xbar);
    const auto out = find_slater(pp.wrapped, a);
    ASSERT_EQ(out.kind, SlaterKind::SlaterPoint);
    EXPECT_TRUE(is_slater_point(pp.wrapped, a, *out.point));
    EXPECT_TRUE(pp.wrapped.feasible_set().contains(*out.point));
}

TEST(FindSlater, SoundAgainstGridOnRandomInstances)
{
    // A grid point with every margin positive means F has a Slater point, so
    // the search must not report ParetoRegion; and any reported point must
    // pass the strict check.
    std::mt19937_64 rng(5);
    for (int inst = 0; inst < 30; ++inst) {
        const Index n = 2 + inst % 2;
        std::vector<ObjectiveFunction> f;
        for (int j = 0; j < 2; ++j) f.push_back(oracle::to_objective(oracle::random_quadratic(rng, n), "q"));
        MultiObjectiveProblem p(f, FeasibleSet::box_simplex(n));
        const Vector xbar = oracle::random_simplex_point(rng, n);
        const auto a = reference_from_point(p, xbar);
        const auto out = find_slater(p, a);
        bool grid_has_slater = false;
        for (const Vector& x : enumerate_grid(p.feasible_set(), 101)) grid_has_slater |= is_slater_point(p, a, x);
        if (grid_has_slater) EXPECT_EQ(out.kind, SlaterKind::SlaterPoint);
        if (out.point) EXPECT_TRUE(is_slater_point(p, a, *out.point));
    }
}

TEST(ReduceProblem, WeakToyShape)
{
    const auto w = fixture::weak_toy();
    const auto wa = ReferencePoint::explicit_levels(Vector{{0.09, 0.09, 0.0}});
    const auto r = reduce_problem(w, wa, {2});
    EXPECT_EQ(r.problem.num_objectives(), 2);
    EXPECT_EQ(r.kept, (std::vector<Index>{0, 1}));
    EXPECT_EQ(r.reference.levels(), (Vector{{0.09, 0.09}}));
    // x2 <= 0 is folded into the set.
    const Vector proj = r.problem.feasible_set().project(Vector{{0.5, 0.7}});
    EXPECT_NEAR(proj[1], 0.0, 1e-10);
    EXPECT_NEAR(proj[0], 0.5, 1e-10);
    EXPECT_TRUE(r.problem.feasible_set().contains(Vector{{0.5, 0.0}}));
    EXPECT_FALSE(r.problem.feasible_set().contains(Vector{{0.5, 0.1}}));
    const auto again = find_slater(r.problem, r.reference, Vector{{0.5, 0.0}});
    EXPECT_EQ(again.kind, SlaterKind::SlaterPoint);
}

TEST(ReduceProblem, Errors)
{
    const auto w = fixture::weak_toy();
    const auto wa = ReferencePoint::explicit_levels(Vector{{0.09, 0.09, 0.0}});
    EXPECT_THROW((void)reduce_problem(w, wa, {}), InputError);
    EXPECT_THROW((void)reduce_problem(w, wa, {0, 1, 2}), InputError);
    EXPECT_THROW((void)reduce_problem(w, wa, {3}), InputError);
    EXPECT_THROW((void)reduce_problem(w, toy_ref(0.5), {0}), InputError);
}
