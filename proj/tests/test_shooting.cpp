#include "rpiso/shooting.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace rpiso;

namespace
{
const RadialDensity p1 = RadialDensity::power(1.0);

ShotCurve shoot(int n, double p, double kappa0, bool experimental = false)
{
    return integrate(init_shot(n, RadialDensity::power(p), kappa0, {}, experimental));
}

// Largest distance from the samples to the axis-centred circle through (1,0)
// with curvature kappa0, over the part of the curve at least rmin from the origin.
double circle_deviation(const ShotCurve& c, double rmin)
{
    const double r = 1.0 / c.config.kappa0;
    const Point2 centre{1.0 - r, 0.0};
    double worst = 0.0;
    for (const CurveSample& s : c.samples)
        if (s.point().norm() >= rmin)
            worst = std::max(worst, std::abs((s.point() - centre).norm() - r));
    return worst;
}
} // namespace

TEST(InitShot, Constants)
{
    EXPECT_DOUBLE_EQ(init_shot(3, p1, 2.0).c, 5.0);
    EXPECT_DOUBLE_EQ(init_shot(3, RadialDensity::power(0), 1.0).c, 2.0);
    EXPECT_DOUBLE_EQ(init_shot(7, RadialDensity::power(5), 2.0).c, 17.0);
    EXPECT_DOUBLE_EQ(init_shot(3, p1, 2.5).f0(), 0.6);
}

TEST(InitShot, Errors)
{
    EXPECT_THROW(init_shot(3, p1, 0.0), Error);
    EXPECT_THROW(init_shot(3, p1, -1.0), Error);
    EXPECT_THROW(init_shot(2, p1, 1.5), Error);
    EXPECT_NO_THROW(init_shot(2, p1, 1.5, {}, true));
    EXPECT_THROW(init_shot(3, RadialDensity::linear_log(), 1.5), Error);
    EXPECT_TRUE(init_shot(3, p1, 0.9).out_of_regime);
}

TEST(CurvatureRhs, ClosingCircleTop)
{
    EXPECT_NEAR(curvature_rhs({0.5, 0.5, pi, 1.0}, init_shot(3, p1, 2.0)), 2.0, 1e-14);
}

TEST(CurvatureRhs, StartState) { EXPECT_DOUBLE_EQ(curvature_rhs({1.0, 0.0, pi / 2, 0.0}, init_shot(3, p1, 2.0)), 2.0); }

TEST(CurvatureRhs, ClassicalSphere)
{
    const ShotConfig cfg = init_shot(3, RadialDensity::power(0), 1.0);
    for (double t : {0.3, 1.1, 2.0, 2.8})
        EXPECT_NEAR(curvature_rhs({std::cos(t), std::sin(t), t + pi / 2, t}, cfg), 1.0, 1e-14);
}

TEST(CurvatureRhs, BelowAxisIsOutOfDomain)
{
    try {
        curvature_rhs({0.5, -0.1, pi, 1.0}, init_shot(3, p1, 2.0));
        ADD_FAILURE();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::integration_domain);
    }
}

TEST(Integrate, ClosingCircle)
{
    const ShotCurve c = shoot(3, 1, 2.0);
    EXPECT_EQ(classify(c), ShotOutcome::closed);
    EXPECT_TRUE(c.origin_hit);
    EXPECT_LE(c.endpoint.norm(), c.config.tol.origin_radius);
    EXPECT_LE(circle_deviation(c, 0.1), 1e-8);
    ASSERT_TRUE(c.delta.has_value());
    // delta sits at the top of the circle, a quarter of the way round
    EXPECT_NEAR(c.delta->x, 0.5, 1e-8);
    EXPECT_NEAR(c.delta->y, 0.5, 1e-8);
    EXPECT_NEAR(c.delta->s, pi / 4, 1e-8);
    // the tangent turns straight down on the way into the origin; at distance d
    // from it the circle's tangent is off vertical by about 2d
    const CurveSample* last = nullptr;
    for (const CurveSample& s : c.samples)
        if (s.point().norm() >= 0.01)
            last = &s;
    ASSERT_NE(last, nullptr);
    EXPECT_NEAR(last->phi, 3 * pi / 2, 3.0 * last->point().norm());
}

TEST(Integrate, FlatDensityGivesCentredSpheres)
{
    for (double k : {0.5, 1.0, 1.7, 2.0, 4.0}) {
        const ShotCurve c = shoot(3, 0, k, true);
        EXPECT_LE(circle_deviation(c, 0.0), 1e-8) << "kappa0 = " << k;
        EXPECT_EQ(classify(c), ShotOutcome::closed) << "kappa0 = " << k;
    }
}

TEST(Integrate, RightCaseEndsRightOfOrigin)
{
    const ShotCurve c = shoot(3, 1, 3.0);
    ASSERT_TRUE(c.beta.has_value());
    EXPECT_GT(c.beta->x, 0.0);
    EXPECT_EQ(classify(c), ShotOutcome::right_case);
}

TEST(Integrate, SamplesSatisfyTheOde)
{
    const ShotCurve c = shoot(4, 2, 1.5);
    for (const CurveSample& s : c.samples) {
        if (s.y < 1e-3)
            continue;
        EXPECT_NEAR(s.kappa + (c.config.n - 2) * s.lambda + s.H1, c.config.c, 1e-9);
    }
}

TEST(Integrate, Deterministic)
{
    const ShotCurve a = shoot(7, 2, 1.5);
    const ShotCurve b = shoot(7, 2, 1.5);
    ASSERT_EQ(a.samples.size(), b.samples.size());
    for (std::size_t i = 0; i < a.samples.size(); ++i) {
        EXPECT_EQ(a.samples[i].x, b.samples[i].x);
        EXPECT_EQ(a.samples[i].y, b.samples[i].y);
    }
}

TEST(Classify, Examples)
{
    EXPECT_EQ(classify(shoot(3, 1, 3.0)), ShotOutcome::right_case);
    EXPECT_EQ(classify(shoot(3, 1, 1.5)), ShotOutcome::left_case);
    EXPECT_EQ(classify(shoot(3, 1, 2.0)), ShotOutcome::closed);
    EXPECT_EQ(classify(shoot(3, 1, 0.8)), ShotOutcome::out_of_regime);
}

TEST(Classify, Quadrants)
{
    EXPECT_TRUE(fourth_quadrant_tangent(two_pi));
    EXPECT_TRUE(fourth_quadrant_tangent(7 * pi / 4));
    EXPECT_FALSE(fourth_quadrant_tangent(3 * pi / 2));
    EXPECT_TRUE(third_quadrant_tangent(pi));
    EXPECT_TRUE(third_quadrant_tangent(5 * pi / 4));
    EXPECT_FALSE(third_quadrant_tangent(3 * pi / 2));
}

TEST(Bisection, RecoversTwo)
{
    for (auto [n, p] : {std::pair{3, 1.0}, std::pair{4, 0.5}, std::pair{7, 5.0}}) {
        const ClosingResult r = find_closing_kappa0(n, RadialDensity::power(p), 1.1, 5.0);
        EXPECT_NEAR(r.kappa0, 2.0, 1e-6) << n << ' ' << p;
        EXPECT_FALSE(r.trace.empty());
        EXPECT_LE(r.hi - r.lo, 1e-7);
    }
}

TEST(Bisection, RejectsNonStraddlingBracket)
{
    try {
        find_closing_kappa0(3, p1, 2.5, 5.0);
        ADD_FAILURE();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::invalid_bracket);
    }
    EXPECT_THROW(find_closing_kappa0(3, p1, 3.0, 2.0), Error);
}

TEST(Features, RightCase)
{
    const ShotCurve c = shoot(3, 1, 3.0);
    const FeatureReport f = extract_features(c);
    ASSERT_TRUE(f.delta && f.eta);
    EXPECT_NEAR(std::fmod(f.eta->phi, two_pi), 3 * pi / 2, 1e-9);
    EXPECT_GT(f.eta->x, 0.0);
    EXPECT_FALSE(f.pairs.empty());
    EXPECT_GT(f.min_pair_gap, 0.0);
}

TEST(Features, LeftCase)
{
    const ShotCurve c = shoot(3, 1, 1.5);
    const FeatureReport f = extract_features(c);
    EXPECT_EQ(f.horizontal_tangent_count, 1);
    EXPECT_FALSE(f.pairs.empty());
    EXPECT_LT(f.max_pair_gap, 0.0);
    EXPECT_GT(f.trailing_negative_kappa, 0.0);
    EXPECT_FALSE(f.eta.has_value());
}

TEST(Features, ClosedCase)
{
    const ShotCurve c = shoot(3, 1, 2.0);
    const FeatureReport f = extract_features(c);
    ASSERT_TRUE(f.delta.has_value());
    EXPECT_LE(f.max_radial_speed, 1e-8);
    EXPECT_FALSE(f.radial_violation_from.has_value());
}

TEST(KappaSecond, MatchesSeriesAtTheStart)
{
    for (double k : {1.2, 1.8, 2.2, 4.0}) {
        const ShotCurve c = shoot(3, 1, k);
        const double a = 1 - 1 / k, r = 1 / k;
        const double expected = 3 * a * (a - r) / (4 * r * r * (a + r) * (a + r) * (a + r));
        EXPECT_NEAR(kappa_second_at_start(c), expected, 1e-3 * std::abs(expected) + 1e-6) << k;
    }
}

TEST(StateAt, InterpolatesBetweenSamples)
{
    const ShotCurve c = shoot(3, 0, 1.0, true);
    for (double s : {0.123, 1.0, 2.5}) {
        const CurveSample q = state_at(c, s);
        EXPECT_NEAR(q.x, std::cos(s), 1e-9);
        EXPECT_NEAR(q.y, std::sin(s), 1e-9);
    }
}
