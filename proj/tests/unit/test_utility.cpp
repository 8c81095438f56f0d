#include "utilscal/errors.hpp"
#include "utilscal/utility.hpp"

#include "oracles.hpp"
#include "utility_properties.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>

using namespace utilscal;

namespace {

const double kThird = 1.0 / 3.0;

double value(const UtilityFunction& u, const Vector& y)
{
    return utility_value(u, y).as_double();
}

}  // namespace

TEST(UtilityValue, Examples)
{
    EXPECT_NEAR(value(UtilityFunction::cobb_douglas(Vector{{kThird, kThird, kThird}}), Vector::Ones(3)), 1.0, 1e-15);
    EXPECT_EQ(value(UtilityFunction::leontief(Vector{{1.0, 2.0}}), Vector{{3.0, 1.0}}), 2.0);
    EXPECT_NEAR(value(UtilityFunction::ces(Vector::Ones(3), -0.5, 1.0), Vector::Constant(3, 4.0)), 4.0 / 9.0, 1e-15);
}

TEST(UtilityValue, OutsideOrthantIsNegativeInfinity)
{
    const Vector y{{-1.0, 1.0, 1.0}};
    for (const auto& u : {UtilityFunction::cobb_douglas(Vector::Ones(3)), UtilityFunction::leontief(Vector::Ones(3)),
                          UtilityFunction::ces(Vector::Ones(3), -0.5), UtilityFunction::linear(Vector::Ones(3))}) {
        const ExtendedReal v = utility_value(u, y);
        EXPECT_FALSE(v.is_finite()) << u.label();
        EXPECT_EQ(v, ExtendedReal::negative_infinity());
        EXPECT_FALSE(utility_log_value(u, y).is_finite());
    }
}

TEST(UtilityValue, BoundaryConventions)
{
    EXPECT_EQ(value(UtilityFunction::cobb_douglas(Vector{{0.5, 0.5}}), Vector{{0.0, 3.0}}), 0.0);
    EXPECT_EQ(value(UtilityFunction::ces(Vector{{1.0, 1.0}}, -0.5), Vector{{0.0, 3.0}}), 0.0);
    // A zero weight removes the coordinate from the product and the sum.
    EXPECT_NEAR(value(UtilityFunction::cobb_douglas(Vector{{0.5, 0.0}}), Vector{{4.0, 0.0}}), 2.0, 1e-15);
    EXPECT_NEAR(value(UtilityFunction::ces(Vector{{1.0, 0.0}}, -1.0), Vector{{2.0, 0.0}}), 2.0, 1e-15);
}

TEST(UtilityValue, MatchesDirectFormulas)
{
    std::mt19937_64 rng(31);
    for (int s = 0; s < 200; ++s) {
        const Vector alpha = oracle::uniform_vector(rng, 3, 0.1, 2.0);
        const Vector y = oracle::uniform_vector(rng, 3, 0.01, 5.0);
        const double rho = oracle::uniform(rng, -3.0, 1.0);
        const double kappa = oracle::uniform(rng, 0.1, 1.0);
        long double cd = 1.0L;
        long double sum = 0.0L;
        long double lin = 0.0L;
        for (Index j = 0; j < 3; ++j) {
            cd *= std::pow(static_cast<long double>(y[j]), static_cast<long double>(alpha[j]));
            sum += alpha[j] * std::pow(static_cast<long double>(y[j]), static_cast<long double>(rho));
            lin += alpha[j] * y[j];
        }
        const long double ces = std::pow(sum, static_cast<long double>(kappa / rho));
        EXPECT_NEAR(value(UtilityFunction::cobb_douglas(alpha), y), static_cast<double>(cd), 1e-12 * static_cast<double>(cd));
        EXPECT_NEAR(value(UtilityFunction::ces(alpha, rho, kappa), y), static_cast<double>(ces), 1e-12 * static_cast<double>(ces));
        EXPECT_NEAR(value(UtilityFunction::linear(alpha), y), static_cast<double>(lin), 1e-12 * static_cast<double>(lin));
        EXPECT_EQ(value(UtilityFunction::leontief(alpha), y), (alpha.array() * y.array()).minCoeff());
    }
}

TEST(UtilityValue, LinearIsCesWithUnitParameters)
{
    const Vector alpha{{0.3, 1.7}};
    const auto lin = UtilityFunction::linear(alpha);
    const auto ces = UtilityFunction::ces(alpha, 1.0, 1.0);
    EXPECT_TRUE(lin.is_linear());
    EXPECT_EQ(lin.family(), UtilityFamily::CES);
    std::mt19937_64 rng(2);
    for (int s = 0; s < 100; ++s) {
        const Vector y = oracle::uniform_vector(rng, 2, 0.0, 3.0);
        EXPECT_EQ(value(lin, y), value(ces, y));
    }
}

TEST(UtilityValue, LogDomainSurvivesTinyMargins)
{
    const auto cd = UtilityFunction::cobb_douglas(Vector::Constant(200, 1.0));
    const Vector y = Vector::Constant(200, 1e-5);
    EXPECT_NEAR(utility_log_value(cd, y).value(), 200.0 * std::log(1e-5), 1e-9);
    const auto ces = UtilityFunction::ces(Vector::Ones(3), -0.5);
    const Vector tiny = Vector::Constant(3, 1e-200);
    EXPECT_NEAR(utility_log_value(ces, tiny).value(), std::log(value(ces, tiny)), 1e-9);
}

TEST(UtilityGradient, Examples)
{
    const Vector g = utility_gradient(UtilityFunction::cobb_douglas(Vector{{0.5, 0.5}}), Vector::Ones(2));
    EXPECT_NEAR(g[0], 0.5, 1e-15);
    EXPECT_NEAR(g[1], 0.5, 1e-15);
    const Vector alpha{{0.4, 2.5}};
    EXPECT_TRUE(utility_gradient(UtilityFunction::linear(alpha), Vector{{3.0, 0.2}}).isApprox(alpha, 1e-15));

    const auto ces = UtilityFunction::ces(Vector{{1.0, 1.0}}, -1.0, 1.0);
    const Vector y{{1.0, 2.0}};
    const Vector fd = oracle::fd_gradient([&](const Vector& z) { return value(ces, z); }, y);
    EXPECT_LE(oracle::relative_error(utility_gradient(ces, y), fd), 1e-7);
}

TEST(UtilityGradient, Errors)
{
    EXPECT_THROW((void)utility_gradient(UtilityFunction::leontief(Vector::Ones(2)), Vector::Ones(2)),
                 UnsupportedOperation);
    EXPECT_THROW((void)utility_gradient(UtilityFunction::cobb_douglas(Vector::Ones(2)), Vector{{0.0, 1.0}}),
                 DomainError);
    EXPECT_THROW((void)utility_gradient(UtilityFunction::ces(Vector::Ones(2), -0.5), Vector{{1.0, -1.0}}),
                 DomainError);
}

TEST(UtilityGradient, MatchesFiniteDifferences)
{
    std::mt19937_64 rng(8);
    for (int draw = 0; draw < 10; ++draw) {
        const Vector alpha = oracle::uniform_vector(rng, 3, 0.05, 1.5);
        const double rho = draw % 2 == 0 ? oracle::uniform(rng, -3.0, -0.1) : oracle::uniform(rng, 0.1, 1.0);
        const double kappa = oracle::uniform(rng, 0.2, 1.0);
        for (const auto& u : {UtilityFunction::cobb_douglas(alpha), UtilityFunction::ces(alpha, rho, kappa)}) {
            for (int s = 0; s < 100; ++s) {
                const Vector y = oracle::uniform_vector(rng, 3, 0.1, 3.0);
                const Vector fd = oracle::fd_gradient([&](const Vector& z) { return value(u, z); }, y);
                EXPECT_LE(oracle::relative_error(utility_gradient(u, y), fd), 1e-6) << u.label();
            }
        }
    }
}

TEST(UtilityParameters, Validation)
{
    EXPECT_THROW((void)UtilityFunction::cobb_douglas(Vector{{-0.1, 1.0}}), InputError);
    EXPECT_THROW((void)UtilityFunction::cobb_douglas(Vector::Zero(2)), InputError);
    EXPECT_THROW((void)UtilityFunction::leontief(Vector{{std::nan(""), 1.0}}), InputError);
    EXPECT_THROW((void)UtilityFunction::ces(Vector::Ones(2), 0.0), InputError);
    EXPECT_THROW((void)UtilityFunction::ces(Vector::Ones(2), 1.5), InputError);
    EXPECT_THROW((void)UtilityFunction::ces(Vector::Ones(2), -1.0, 0.0), InputError);
    EXPECT_THROW((void)UtilityFunction::ces(Vector::Ones(2), -1.0, 1.2), InputError);
    EXPECT_NO_THROW((void)UtilityFunction::ces(Vector::Ones(2), 1.0, 1.0));
}

TEST(Descriptor, Examples)
{
    const auto cd = compute_descriptor(UtilityFunction::cobb_douglas(Vector{{kThird, kThird, kThird}}));
    EXPECT_TRUE(cd.is_barrier);
    EXPECT_EQ(cd.barrier_level, 0.0);
    EXPECT_EQ(cd.monotonicity, Monotonicity::StrictInterior);
    EXPECT_EQ(cd.concavity, Concavity::Concave);
    EXPECT_TRUE(cd.differentiable_interior);

    // CES with rho < 0 is pinned at 0 on the boundary, so strictness only
    // holds on the open orthant.
    const auto ces = compute_descriptor(UtilityFunction::ces(Vector::Ones(3), -0.5, 1.0));
    EXPECT_TRUE(ces.is_barrier);
    EXPECT_EQ(ces.monotonicity, Monotonicity::StrictInterior);
    EXPECT_EQ(ces.concavity, Concavity::Concave);

    EXPECT_FALSE(compute_descriptor(UtilityFunction::linear(Vector::Ones(2))).is_barrier);
}

TEST(Descriptor, RuleTable)
{
    struct Row {
        UtilityFunction u;
        bool barrier;
        Monotonicity mono;
        Concavity conc;
        bool smooth;
    };
    const std::vector<Row> rows = {
        {UtilityFunction::cobb_douglas(Vector{{0.2, 0.3}}), true, Monotonicity::StrictInterior,
         Concavity::StrictlyConcaveInterior, true},
        {UtilityFunction::cobb_douglas(Vector{{0.5, 0.5}}), true, Monotonicity::StrictInterior, Concavity::Concave, true},
        {UtilityFunction::cobb_douglas(Vector{{1.0, 1.0}}), true, Monotonicity::StrictInterior,
         Concavity::PseudoconcaveInterior, true},
        {UtilityFunction::cobb_douglas(Vector{{0.5, 0.0}}), false, Monotonicity::WeaklyStrict, Concavity::Concave, true},
        {UtilityFunction::leontief(Vector{{1.0, 2.0}}), true, Monotonicity::WeaklyStrict, Concavity::Concave, false},
        {UtilityFunction::leontief(Vector{{1.0, 0.0}}), false, Monotonicity::Monotone, Concavity::Concave, false},
        {UtilityFunction::ces(Vector{{1.0, 2.0}}, 0.5, 0.8), false, Monotonicity::Strict, Concavity::StrictlyConcave, true},
        {UtilityFunction::ces(Vector{{1.0, 2.0}}, -2.0, 0.5), true, Monotonicity::StrictInterior,
         Concavity::StrictlyConcaveInterior, true},
        {UtilityFunction::ces(Vector{{1.0, 0.0}}, -2.0, 1.0), false, Monotonicity::WeaklyStrict, Concavity::Concave, true},
        {UtilityFunction::linear(Vector{{1.0, 1.0}}), false, Monotonicity::Strict, Concavity::Concave, true},
    };
    for (const auto& r : rows) {
        const auto d = compute_descriptor(r.u);
        EXPECT_EQ(d.is_barrier, r.barrier) << r.u.label();
        EXPECT_EQ(d.monotonicity, r.mono) << r.u.label();
        EXPECT_EQ(d.concavity, r.conc) << r.u.label();
        EXPECT_EQ(d.differentiable_interior, r.smooth) << r.u.label();
    }
}

TEST(UtilityProperties, SampledClassesHold)
{
    const auto tally = oracle::run_utility_properties(200, 99);
    EXPECT_GT(tally.checks, 5000);
    EXPECT_EQ(tally.violations, 0) << (tally.failures.empty() ? "" : tally.failures.front());
}

TEST(UtilityLabel, Readable)
{
    EXPECT_EQ(UtilityFunction::cobb_douglas(Vector::Ones(2)).label(), "cd");
    EXPECT_EQ(UtilityFunction::ces(Vector::Ones(2), -0.5, 1.0).label(), "ces(rho=-0.5,kappa=1)");
    EXPECT_EQ(to_string(UtilityFamily::Leontief), "leontief");
}
