#include "rpiso/circle_analysis.hpp"
#include "rpiso/verify.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace rpiso;

namespace
{
const RadialDensity p1 = RadialDensity::power(1.0);

// Right-admissible pair built on the circle centred (0.6, 0) of radius 0.3.
struct RightExample
{
    Point2 q1{0.6 + 0.3 * std::cos(pi / 3), 0.3 * std::sin(pi / 3)};
    UnitVector v1 = UnitVector::from_angle(pi / 3 + pi / 2);
    Point2 q2{0.5, 0.3 * std::sin(pi / 3)};
    UnitVector v2 = UnitVector::from_angle(4 * pi / 3);
};

// Left-admissible pair on the circle centred (0.2, 0) of radius 0.5, with v2
// shallower than the reflection of v1.
struct LeftExample
{
    Point2 q1{0.2 + 0.5 * std::cos(pi / 3), 0.5 * std::sin(pi / 3)};
    UnitVector v1 = UnitVector::from_angle(pi / 3 + pi / 2);
    Point2 q2{-0.1, 0.5 * std::sin(pi / 3)};
    UnitVector v2 = UnitVector::from_angle(200.0 * pi / 180.0);
};
} // namespace

TEST(Tilde, CentredCircleIsItsOwnCanonicalCircle)
{
    for (auto A : {OsculatingCircle::counterclockwise(0.3, 0.0, 0.7), OsculatingCircle::clockwise(0.3, 0.0, 0.7)})
        for (double t : {0.2, 0.8, 1.4, 1.9}) {
            const TildeSample s = tilde_quantities(A, t, p1);
            EXPECT_NEAR(s.dft, 0.0, 1e-15);
            EXPECT_NEAR(s.drt, 0.0, 1e-15);
            EXPECT_NEAR(s.ft, 0.3, 1e-14);
        }
}

TEST(Tilde, QuarterTurnOnCcwCircle)
{
    const TildeSample s = tilde_quantities(OsculatingCircle::counterclockwise(1.0, 0.5, 0.25), 0.25 * pi / 2, p1);
    EXPECT_NEAR(s.dft, 2.0, 1e-14);
    EXPECT_NEAR(s.drt, 0.0, 1e-14);
}

TEST(Tilde, HorizontalLine)
{
    const TildeSample s = tilde_quantities(OsculatingCircle::line({0.5, 0.5}, UnitVector::from(-1, 0)), 0.1, p1);
    EXPECT_DOUBLE_EQ(s.dft, -1.0);
    EXPECT_DOUBLE_EQ(s.dgt, -1.0);
}

TEST(Tilde, VerticalLineUndefined)
{
    EXPECT_THROW(tilde_quantities(OsculatingCircle::line({0.5, 0.5}, UnitVector::from(0, -1)), 0.0, p1), Error);
}

TEST(Tilde, AgreesWithCanonicalCircleAlongTheArc)
{
    const auto A = OsculatingCircle::counterclockwise(0.7, 0.4, 0.3);
    for (double t : {0.1, 0.4, 0.6, 0.8}) {
        const TildeSample s = tilde_quantities(A, t, p1);
        const CanonicalCircle c = canonical_circle(A.position(t), A.tangent(t));
        EXPECT_NEAR(s.ft, c.center_x, 1e-12);
        EXPECT_NEAR(s.lambda_t, c.lambda, 1e-12);
        EXPECT_NEAR(s.h1t, h1_value(A.position(t), A.tangent(t).clockwise(), p1), 1e-12);
    }
}

TEST(Tilde, SecondOrderConvergence)
{
    for (auto kind : {OsculatingCircle::Kind::ccw, OsculatingCircle::Kind::cw, OsculatingCircle::Kind::line}) {
        const TildeConvergence c = tilde_convergence(kind, 100, 7);
        EXPECT_EQ(c.max_g_identity, 0.0);
        for (int q = 0; q < 4; ++q) {
            if (kind == OsculatingCircle::Kind::line && q != 3)
                EXPECT_LT(c.error[q], 1e-9);
            else {
                EXPECT_GE(c.ratio[q], 3.5);
                EXPECT_LE(c.ratio[q], 4.5);
            }
        }
    }
}

TEST(H1TildeSecond, SignFollowsCentrePosition)
{
    EXPECT_DOUBLE_EQ(h1_tilde_second_at_top(0.5, 0.5, p1), 0.0);
    EXPECT_LT(h1_tilde_second_at_top(0.7, 0.3, p1), 0.0);
    EXPECT_GT(h1_tilde_second_at_top(0.4, 0.6, p1), 0.0);
}

TEST(H1TildeSecond, MatchesFiniteDifference)
{
    // the rightmost point of the circle is t = 0 on the ccw parametrization
    const double a = 0.4, r = 0.6, h = 1e-4;
    const auto A = OsculatingCircle::counterclockwise(a, 0.0, r);
    // H1 along a circle about the axis is smooth through t = 0; sample the
    // closed form directly since the tilde transport is singular there
    const auto h1 = [&](double t) { return h1_value(A.position(t), A.tangent(t).clockwise(), p1); };
    const double fd = (h1(h) - 2 * h1(0.0) + h1(-h)) / (h * h);
    EXPECT_NEAR(fd, h1_tilde_second_at_top(a, r, p1), 1e-6);
    EXPECT_THROW(h1_tilde_second_at_top(0.4, 0.0, p1), Error);
}

TEST(AdmissibleRight, Example)
{
    const RightExample e;
    const Admissibility adm = admissible_right(e.q1, e.q2, e.v1, e.v2);
    EXPECT_TRUE(adm.admissible);
    EXPECT_NEAR(adm.a1, 0.6, 1e-14);
    EXPECT_NEAR(adm.r1, 0.3, 1e-14);
}

TEST(AdmissibleRight, TooFarLeftFailsThirdCondition)
{
    RightExample e;
    e.q2.x = 0.40;
    const Admissibility adm = admissible_right(e.q1, e.q2, e.v1, e.v2);
    EXPECT_FALSE(adm.admissible);
    EXPECT_EQ(adm.failed(), std::vector<int>{3});
}

TEST(AdmissibleRight, CircleThroughOriginFailsFirstCondition)
{
    RightExample e;
    e.q1 = {0.3 + 0.3 * std::cos(pi / 3), 0.3 * std::sin(pi / 3)};
    e.q2 = {0.25, e.q1.y};
    const Admissibility adm = admissible_right(e.q1, e.q2, e.v1, e.v2);
    EXPECT_FALSE(adm.admissible);
    EXPECT_FALSE(adm.conditions[0]);
}

TEST(AdmissibleRight, QuadrantPreconditions)
{
    const RightExample e;
    EXPECT_THROW(admissible_right(e.q1, e.q2, UnitVector::from(0, 1), e.v2), Error);
    EXPECT_THROW(admissible_right(e.q1, {0.5, 0.1}, e.v1, e.v2), Error);
}

TEST(AdmissibleLeft, Example)
{
    const LeftExample e;
    const Admissibility adm = admissible_left(e.q1, e.q2, e.v1, e.v2);
    EXPECT_TRUE(adm.admissible) << ::testing::PrintToString(adm.failed());
}

TEST(AdmissibleLeft, LargerSecondRadiusFailsThirdCondition)
{
    LeftExample e;
    e.v2 = UnitVector::from_angle(250.0 * pi / 180.0);
    const Admissibility adm = admissible_left(e.q1, e.q2, e.v1, e.v2);
    EXPECT_GT(adm.r2, adm.r1);
    EXPECT_FALSE(adm.conditions[2]);
    EXPECT_FALSE(adm.admissible);
}

TEST(AdmissibleLeft, LeftOfTangencyPointFailsFourthCondition)
{
    LeftExample e;
    e.q2.x = -0.2;
    const Admissibility adm = admissible_left(e.q1, e.q2, e.v1, e.v2);
    EXPECT_LT(e.q2.x, adm.x_star);
    EXPECT_EQ(adm.failed(), std::vector<int>{4});
}

TEST(XStar, Examples)
{
    EXPECT_DOUBLE_EQ(x_star({0, 1}, UnitVector::from(-1, 0)), 0.0);
    EXPECT_NEAR(x_star({0, 1}, UnitVector::from(-std::sqrt(0.5), -std::sqrt(0.5))), -1.0, 1e-15);
    EXPECT_NEAR(x_star({0, 0.5}, UnitVector::from(-0.8, -0.6)), -0.375, 1e-15);
    try {
        x_star({0, 0.5}, UnitVector::from(0, -1));
        ADD_FAILURE();
    } catch (const Error& err) {
        EXPECT_EQ(err.code(), Errc::no_solution);
    }
}

TEST(H1Compare, RightExampleOrdersFirstAbove)
{
    const RightExample e;
    const H1Comparison c = h1_compare(e.q1, e.q2, e.v1, e.v2);
    EXPECT_GT(c.first, 0.0);
    EXPECT_LT(c.second, 0.0);
    EXPECT_TRUE(c.first_greater(1e-12));
}

TEST(H1Compare, LeftExampleOrdersSecondAbove)
{
    const LeftExample e;
    EXPECT_TRUE(h1_compare(e.q1, e.q2, e.v1, e.v2).second_greater(1e-12));
}

TEST(H1Compare, OriginIsSingular)
{
    EXPECT_THROW(h1_compare({0, 0}, {1, 1}, UnitVector::from(-1, 0), UnitVector::from(-1, 0)), Error);
}

TEST(Samplers, ProduceAdmissibleConfigurationsDeterministically)
{
    std::mt19937_64 a(3), b(3);
    for (int k = 0; k < 200; ++k) {
        const SampledConfiguration s = sample_right_admissible(a);
        EXPECT_TRUE(admissible_right(s.config.p1, s.config.p2, s.config.v1, s.config.v2).admissible);
        const SampledConfiguration t = sample_right_admissible(b);
        EXPECT_EQ(s.config.p2.x, t.config.p2.x);
        const SampledConfiguration l = sample_left_admissible(a);
        EXPECT_TRUE(admissible_left(l.config.p1, l.config.p2, l.config.v1, l.config.v2).admissible);
        sample_left_admissible(b);
    }
}

namespace
{
// Lower arc of the circle of the given radius whose tangent angle at x = 0.5 is
// alpha, shifted so its value there is `end`.
std::vector<GraphSample> lower_arc(double radius, double alpha, double end, double x0, int m)
{
    const double centre = 0.5 - radius * std::sin(alpha);
    const auto w = [&](double x) { return std::sqrt(radius * radius - (x - centre) * (x - centre)); };
    std::vector<GraphSample> out;
    for (int i = 0; i <= m; ++i) {
        const double x = x0 + (0.5 - x0) * i / m;
        out.push_back({x, end + w(0.5) - w(x), (x - centre) / w(x), 1.0 / radius});
    }
    return out;
}
} // namespace

TEST(CurvatureComparison, IdenticalGraphs)
{
    const auto f = lower_arc(1.0, 0.4, 0.2, 0.2, 50);
    const CurvatureComparison c = curvature_comparison_check(f, f);
    EXPECT_TRUE(c.hypotheses_met);
    EXPECT_TRUE(c.f_below_g);
    EXPECT_TRUE(c.angle_ordered);
    EXPECT_FALSE(c.strict_gap.has_value());
}

TEST(CurvatureComparison, FlatterArcLiesBelow)
{
    const double alpha = 0.4;
    const double x0 = 0.5 - std::sin(alpha);
    const auto f = lower_arc(2.0, alpha, 0.2, x0, 100);
    const auto g = lower_arc(1.0, alpha, 0.2, x0, 100);
    const CurvatureComparison c = curvature_comparison_check(f, g);
    ASSERT_TRUE(c.hypotheses_met) << c.failed_hypothesis;
    EXPECT_TRUE(c.f_below_g);
    EXPECT_TRUE(c.angle_ordered);
    ASSERT_TRUE(c.strict_gap.has_value());
    EXPECT_GT(*c.strict_gap, 0.0);
    EXPECT_LT(f.front().value, g.front().value);
}

TEST(CurvatureComparison, CurvatureViolationSkipsCheck)
{
    auto f = lower_arc(1.0, 0.4, 0.2, 0.2, 20);
    auto g = lower_arc(1.0, 0.4, 0.2, 0.2, 20);
    g[7].curvature = 0.5;
    const CurvatureComparison c = curvature_comparison_check(f, g);
    EXPECT_FALSE(c.hypotheses_met);
    EXPECT_EQ(c.failed_hypothesis, "curvature ordering");
}
