#include "rpiso/density.hpp"
#include "rpiso/geometry.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace rpiso;

namespace
{
const double r2 = std::sqrt(2.0) / 2.0;

template <class F>
Errc code_of(F&& f)
{
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "no error thrown";
    return Errc::io_error;
}
} // namespace

TEST(Theta, QuarterTurn) { EXPECT_DOUBLE_EQ(theta(UnitVector::from(0.0, 1.0)), pi / 2); }

TEST(Theta, PositiveAxisMapsToTwoPi) { EXPECT_DOUBLE_EQ(theta(UnitVector::from(1.0, 0.0)), two_pi); }

TEST(Theta, ThirdQuadrantDiagonal) { EXPECT_NEAR(theta(UnitVector::from(-r2, -r2)), 5 * pi / 4, 1e-15); }

TEST(Theta, RangeIsHalfOpen)
{
    for (int k = 1; k <= 720; ++k) {
        const double t = theta(UnitVector::from_angle(k * pi / 360));
        EXPECT_GT(t, 0.0);
        EXPECT_LE(t, two_pi);
    }
}

TEST(UnitVector, RejectsNonUnit) { EXPECT_EQ(code_of([] { UnitVector::from(1.0, 1e-6 + 1e-4); }), Errc::invalid_argument); }

TEST(UnitVector, ClockwiseNormal)
{
    const UnitVector t = UnitVector::from_angle(0.7);
    const UnitVector nu = t.clockwise();
    EXPECT_NEAR(nu.ux(), std::sin(0.7), 1e-15);
    EXPECT_NEAR(nu.uy(), -std::cos(0.7), 1e-15);
}

TEST(H1, RightPointRadialNormal) { EXPECT_DOUBLE_EQ(h1_value({1, 0}, UnitVector::from(1, 0), RadialDensity::power(1)), 1.0); }

TEST(H1, OrthogonalNormalVanishes)
{
    for (double p : {0.5, 1.0, 3.0})
        EXPECT_DOUBLE_EQ(h1_value({0, 1}, UnitVector::from(1, 0), RadialDensity::power(p)), 0.0);
}

TEST(H1, HandEvaluation) { EXPECT_NEAR(h1_value({0.5, 0.5}, UnitVector::from(0, 1), RadialDensity::power(2)), 2.0, 1e-15); }

TEST(H1, OriginIsSingular)
{
    EXPECT_EQ(code_of([] { h1_value({0, 0}, UnitVector::from(1, 0), RadialDensity::power(1)); }), Errc::singular_point);
}

TEST(CanonicalCircle, UnitCircleTop)
{
    const CanonicalCircle c = canonical_circle({0, 1}, UnitVector::from(-1, 0));
    EXPECT_FALSE(c.degenerate);
    EXPECT_NEAR(c.center_x, 0.0, 1e-15);
    EXPECT_NEAR(c.radius, 1.0, 1e-15);
    EXPECT_NEAR(c.lambda, 1.0, 1e-15);
}

TEST(CanonicalCircle, Diagonal)
{
    const CanonicalCircle c = canonical_circle({1, 1}, UnitVector::from(-r2, r2));
    EXPECT_NEAR(c.center_x, 0.0, 1e-15);
    EXPECT_NEAR(c.radius, std::sqrt(2.0), 1e-15);
    EXPECT_NEAR(c.lambda, 1 / std::sqrt(2.0), 1e-15);
}

TEST(CanonicalCircle, VerticalOnAxisIsDegenerate) { EXPECT_TRUE(canonical_circle({0.5, 0}, UnitVector::from(0, 1)).degenerate); }

TEST(CanonicalCircle, VerticalOffAxisIsDegenerate) { EXPECT_TRUE(canonical_circle({0.5, 0.3}, UnitVector::from(0, -1)).degenerate); }

TEST(CanonicalCircle, OnAxisWithSlopeIsUndefined)
{
    EXPECT_EQ(code_of([] { canonical_circle({0.5, 0}, UnitVector::from(r2, r2)); }), Errc::undefined_canonical_circle);
}

TEST(CanonicalCircle, PassesThroughPointPerpendicularToTangent)
{
    for (double phi : {0.3, 1.2, 2.0, 2.9, 3.5, 4.4, 5.9}) {
        const Point2 q{0.3 * phi - 0.5, 0.2 + 0.1 * phi};
        const UnitVector t = UnitVector::from_angle(phi);
        const CanonicalCircle c = canonical_circle(q, t);
        const Point2 d = q - Point2{c.center_x, 0.0};
        EXPECT_NEAR(d.dot(t.vec()), 0.0, 1e-14);
        EXPECT_NEAR(d.norm(), c.radius, 1e-14);
        EXPECT_NEAR(std::abs(c.lambda), 1.0 / c.radius, 1e-14);
    }
}

TEST(CanonicalCircle, OrientationSign)
{
    // clockwise traversal at the top of the unit circle
    EXPECT_NEAR(canonical_circle({0, 1}, UnitVector::from(1, 0)).lambda, -1.0, 1e-15);
}

TEST(Lambda, TopOfUnitCircle) { EXPECT_DOUBLE_EQ(lambda_from_state(1.0, pi), 1.0); }

TEST(Lambda, VerticalTangent) { EXPECT_NEAR(lambda_from_state(0.5, pi / 2), 0.0, 1e-15); }

TEST(Lambda, DownwardVerticalTangent)
{
    EXPECT_NEAR(lambda_from_state(0.5, 3 * pi / 2), 0.0, 1e-15);
    // just past 3pi/2 the tangent turns right and lambda goes negative
    EXPECT_LT(lambda_from_state(0.5, 3 * pi / 2 + 1e-3), 0.0);
}

TEST(Lambda, OffAxisOnly) { EXPECT_EQ(code_of([] { lambda_from_state(0.0, pi); }), Errc::out_of_domain); }

TEST(H0, Sums)
{
    EXPECT_DOUBLE_EQ(h0(2, 2, 3), 4.0);
    EXPECT_DOUBLE_EQ(h0(2, 2, 2), 2.0);
    for (int n : {3, 4, 7})
        EXPECT_NEAR(h0(1 / 0.7, 1 / 0.7, n), (n - 1) / 0.7, 1e-14);
    EXPECT_EQ(code_of([] { h0(1, 1, 1); }), Errc::invalid_argument);
}

TEST(Hf, ClosingCircleRightPoint)
{
    // circle through the origin centred (1/2, 0); at (1,0) the tangent points up
    EXPECT_NEAR(hf({1, 0.0}, UnitVector::from(0, 1), 2.0, 3, RadialDensity::power(1)), 5.0, 1e-14);
}

TEST(Hf, ClosingCircleTop)
{
    EXPECT_NEAR(hf({0.5, 0.5}, UnitVector::from(-1, 0), 2.0, 3, RadialDensity::power(1)), 5.0, 1e-14);
}

TEST(Hf, ClassicalSphere)
{
    const RadialDensity flat = RadialDensity::power(0);
    for (double phi : {0.4, 1.3, 2.2, 2.9}) {
        const Point2 q{std::cos(phi), std::sin(phi)};
        EXPECT_NEAR(hf(q, UnitVector::from_angle(phi + pi / 2), 1.0, 3, flat), 2.0, 1e-14);
    }
}

TEST(Density, PowerLogDerivative)
{
    const RadialDensity d = RadialDensity::power(2.5);
    EXPECT_DOUBLE_EQ(d.log_derivative(0.5), 5.0);
    EXPECT_NEAR(d.value(2.0), std::pow(2.0, 2.5), 1e-12);
    EXPECT_EQ(code_of([] { RadialDensity::power(-1); }), Errc::invalid_argument);
    EXPECT_EQ(code_of([&] { (void)d.log_derivative(0.0); }), Errc::singular_point);
}
