#pragma once

#include "rpiso/density.hpp"
#include "rpiso/error.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace rpiso
{

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

struct Point2
{
    double x = 0.0;
    double y = 0.0;

    [[nodiscard]] double norm2() const noexcept { return x * x + y * y; }
    [[nodiscard]] double norm() const noexcept { return std::hypot(x, y); }
    [[nodiscard]] double dot(const Point2& o) const noexcept { return x * o.x + y * o.y; }
    [[nodiscard]] double cross(const Point2& o) const noexcept { return x * o.y - y * o.x; }

    friend Point2 operator+(Point2 a, Point2 b) noexcept { return {a.x + b.x, a.y + b.y}; }
    friend Point2 operator-(Point2 a, Point2 b) noexcept { return {a.x - b.x, a.y - b.y}; }
    friend Point2 operator*(double k, Point2 a) noexcept { return {k * a.x, k * a.y}; }
};

/// Unit vector in the plane; construction normalises and rejects the zero vector.
class UnitVector
{
public:
    UnitVector() = default;

    static UnitVector from(double ux, double uy)
    {
        const double len = std::hypot(ux, uy);
        if (!std::isfinite(len) || std::abs(len - 1.0) > 1e-9)
            throw Error(Errc::invalid_argument, "direction is not a unit vector");
        UnitVector u;
        u.ux_ = ux / len;
        u.uy_ = uy / len;
        return u;
    }

    static UnitVector from_angle(double phi) noexcept
    {
        UnitVector u;
        u.ux_ = std::cos(phi);
        u.uy_ = std::sin(phi);
        return u;
    }

    [[nodiscard]] double ux() const noexcept { return ux_; }
    [[nodiscard]] double uy() const noexcept { return uy_; }
    [[nodiscard]] Point2 vec() const noexcept { return {ux_, uy_}; }

    /// Rotation by -pi/2; for a tangent this gives the outward normal of a ccw curve.
    [[nodiscard]] UnitVector clockwise() const noexcept
    {
        UnitVector u;
        u.ux_ = uy_;
        u.uy_ = -ux_;
        return u;
    }

    /// Reflection across the horizontal axis.
    [[nodiscard]] UnitVector mirrored() const noexcept
    {
        UnitVector u;
        u.ux_ = ux_;
        u.uy_ = -uy_;
        return u;
    }

private:
    double ux_ = 1.0;
    double uy_ = 0.0;
};

/// Angle of v in (0, 2pi]; the direction (1, 0) maps to 2pi, not 0.
inline double theta(const UnitVector& v) noexcept
{
    const double a = std::atan2(v.uy(), v.ux());
    return a <= 0.0 ? a + two_pi : a;
}

inline constexpr double vertical_tangent_tol = 1e-14;

/// Circle centred on the horizontal axis, tangent to a direction at a point.
struct CanonicalCircle
{
    bool degenerate = false; ///< vertical line: the normal never meets the axis, or q sits on it
    double center_x = 0.0;   ///< F
    double radius = 0.0;     ///< R, +inf when degenerate
    double lambda = 0.0;     ///< signed curvature, positive for ccw traversal
};

inline CanonicalCircle canonical_circle(const Point2& q, const UnitVector& t)
{
    CanonicalCircle c;
    if (std::abs(t.ux()) < vertical_tangent_tol) {
        c.degenerate = true;
        c.center_x = std::numeric_limits<double>::quiet_NaN();
        c.radius = std::numeric_limits<double>::infinity();
        c.lambda = 0.0;
        return c;
    }
    if (q.y == 0.0)
        throw Error(Errc::undefined_canonical_circle, "point on the axis with a non-vertical tangent");
    c.center_x = q.dot(t.vec()) / t.ux();
    const Point2 to_center = Point2{c.center_x, 0.0} - q;
    c.radius = to_center.norm();
    const bool ccw = t.vec().cross(to_center) > 0.0;
    c.lambda = ccw ? 1.0 / c.radius : -1.0 / c.radius;
    return c;
}

/// Density term p (q.nu)/|q|^2, or g'(|q|) (q.nu)/|q| for a general radial density.
inline double h1_value(const Point2& q, const UnitVector& nu, const RadialDensity& d)
{
    const double r2 = q.norm2();
    if (!(r2 > 0.0))
        throw Error(Errc::singular_point, "density term undefined at the origin");
    const double qn = q.dot(nu.vec());
    if (d.is_power())
        return d.p() * qn / r2;
    const double r = std::sqrt(r2);
    return d.log_derivative(r) * qn / r;
}

/// Canonical-circle curvature along a profile curve: -cos(phi)/y.
inline double lambda_from_state(double y, double phi)
{
    if (!(y > 0.0))
        throw Error(Errc::out_of_domain, "lambda needs y > 0");
    return -std::cos(phi) / y;
}

/// Classical mean curvature of the hypersurface of revolution.
inline double h0(double kappa, double lambda, int n)
{
    if (n < 2)
        throw Error(Errc::invalid_argument, "dimension must be at least 2");
    return kappa + (n - 2) * lambda;
}

/// Generalized mean curvature at q with tangent t and profile curvature kappa.
inline double hf(const Point2& q, const UnitVector& t, double kappa, int n, const RadialDensity& d)
{
    const CanonicalCircle c = canonical_circle(q, t);
    // crossing the axis perpendicularly, every principal curvature equals kappa
    const double lambda = c.degenerate && q.y == 0.0 ? kappa : c.lambda;
    return h0(kappa, lambda, n) + h1_value(q, t.clockwise(), d);
}

} // namespace rpiso
