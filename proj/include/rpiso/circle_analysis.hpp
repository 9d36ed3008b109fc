#pragma once

#include "rpiso/density.hpp"
#include "rpiso/error.hpp"
#include "rpiso/geometry.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace rpiso
{

/// Oriented circle (or line when the curvature vanishes) touching a profile curve
/// to second order. Parameterised by arclength t:
///   ccw:  (a + r cos(t/r), b + r sin(t/r))
///   cw:   (a + r cos(t/r), b - r sin(t/r))
///   line: base + t * direction
struct OsculatingCircle
{
    enum class Kind
    {
        ccw,
        cw,
        line
    };

    Kind kind = Kind::ccw;
    double a = 0.0;
    double b = 0.0;
    double r = 1.0;
    Point2 base{};
    UnitVector direction{};

    static OsculatingCircle counterclockwise(double a, double b, double r)
    {
        if (!(r > 0.0))
            throw Error(Errc::invalid_argument, "osculating radius must be positive");
        OsculatingCircle c;
        c.kind = Kind::ccw;
        c.a = a;
        c.b = b;
        c.r = r;
        return c;
    }

    static OsculatingCircle clockwise(double a, double b, double r)
    {
        OsculatingCircle c = counterclockwise(a, b, r);
        c.kind = Kind::cw;
        return c;
    }

    static OsculatingCircle line(Point2 base, UnitVector direction)
    {
        OsculatingCircle c;
        c.kind = Kind::line;
        c.base = base;
        c.direction = direction;
        return c;
    }

    [[nodiscard]] Point2 position(double t) const noexcept
    {
        switch (kind) {
        case Kind::ccw: return {a + r * std::cos(t / r), b + r * std::sin(t / r)};
        case Kind::cw: return {a + r * std::cos(t / r), b - r * std::sin(t / r)};
        case Kind::line: break;
        }
        return base + t * direction.vec();
    }

    [[nodiscard]] UnitVector tangent(double t) const noexcept
    {
        switch (kind) {
        case Kind::ccw: return UnitVector::from_angle(t / r + pi / 2);
        case Kind::cw: return UnitVector::from_angle(-t / r - pi / 2);
        case Kind::line: break;
        }
        return direction;
    }
};

/// Osculating circle of a curve at q with tangent angle phi and curvature kappa,
/// together with the parameter at which it touches q.
struct Osculation
{
    OsculatingCircle circle;
    double t = 0.0;
};

inline Osculation osculating_circle(const Point2& q, double phi, double kappa)
{
    const double sp = std::sin(phi);
    const double cp = std::cos(phi);
    if (kappa == 0.0)
        return {OsculatingCircle::line(q, UnitVector::from_angle(phi)), 0.0};
    const double rad = 1.0 / std::abs(kappa);
    const Point2 center = q + (1.0 / kappa) * Point2{-sp, cp};
    if (kappa > 0.0)
        return {OsculatingCircle::counterclockwise(center.x, center.y, rad), rad * std::atan2(-cp, sp)};
    return {OsculatingCircle::clockwise(center.x, center.y, rad), rad * std::atan2(-cp, -sp)};
}

/// Canonical-circle quantities transported along an osculating circle, with their
/// arclength derivatives. rt is the signed radius 1/lambda_t.
struct TildeSample
{
    double t = 0.0;
    double ft = 0.0;
    double rt = 0.0;
    double gt = 0.0;
    double h1t = 0.0;
    double dft = 0.0;
    double drt = 0.0;
    double dgt = 0.0;
    double dh1t = 0.0;
    double lambda_t = 0.0;
};

inline constexpr double tilde_singular_tol = 1e-14;

inline TildeSample tilde_quantities(const OsculatingCircle& A, double t, const RadialDensity& d)
{
    if (!d.is_power())
        throw Error(Errc::invalid_argument, "tilde quantities are defined for power densities");
    const double p = d.p();
    TildeSample out;
    out.t = t;

    if (A.kind == OsculatingCircle::Kind::line) {
        const double vx = A.direction.ux();
        const double vy = A.direction.uy();
        const Point2 al = A.position(t);
        if (std::abs(vx) < tilde_singular_tol)
            throw Error(Errc::undefined_canonical_circle, "vertical line has no canonical circle");
        if (al.y == 0.0)
            throw Error(Errc::undefined_canonical_circle, "line meets the axis");
        const double r2 = al.norm2();
        if (!(r2 > 0.0))
            throw Error(Errc::singular_point, "line passes through the origin");
        const double qperp = A.base.dot(A.direction.clockwise().vec());
        out.ft = al.dot(A.direction.vec()) / vx;
        out.rt = -al.y / vx;
        out.dft = 1.0 / vx;
        out.drt = -vy / vx;
        out.dgt = (1.0 + vy) / vx;
        out.h1t = p * qperp / r2;
        out.dh1t = -2.0 * p * qperp * al.dot(A.direction.vec()) / (r2 * r2);
    } else {
        const double a = A.a;
        const double b = A.b;
        const double r = A.r;
        const double u = t / r;
        const double s = std::sin(u);
        const double c = std::cos(u);
        if (std::abs(s) < tilde_singular_tol)
            throw Error(Errc::undefined_canonical_circle, "vertical tangent on the osculating circle");
        const Point2 al = A.position(t);
        if (al.y == 0.0)
            throw Error(Errc::undefined_canonical_circle, "osculating circle meets the axis");
        const double r2 = al.norm2();
        if (!(r2 > 0.0))
            throw Error(Errc::singular_point, "osculating circle passes through the origin");
        const double csc2 = 1.0 / (s * s);
        const double pw = a * a + b * b - r * r;
        if (A.kind == OsculatingCircle::Kind::ccw) {
            out.ft = a - b * c / s;
            out.rt = (b + r * s) / s;
            out.dft = (b / r) * csc2;
            out.drt = -(b / r) * csc2 * c;
            out.dgt = (b / r) * csc2 * (1.0 + c);
            out.h1t = p * (a * c + b * s + r) / r2;
            out.dh1t = -p * pw * (-b * c + a * s) / (r * r2 * r2);
        } else {
            out.ft = a + b * c / s;
            out.rt = b / s - r;
            out.dft = -(b / r) * csc2;
            out.drt = -(b / r) * csc2 * c;
            out.dgt = -(b / r) * csc2 * (1.0 - c);
            out.h1t = p * (-a * c + b * s - r) / r2;
            out.dh1t = p * pw * (a * s + b * c) / (r * r2 * r2);
        }
    }
    out.gt = out.ft - out.rt;
    out.lambda_t = 1.0 / out.rt;
    return out;
}

/// Second arclength derivative of the transported density term at the rightmost
/// point of the circle centred (a, 0) with radius r.
inline double h1_tilde_second_at_top(double a, double r, const RadialDensity& d)
{
    if (!(r > 0.0))
        throw Error(Errc::invalid_argument, "radius must be positive");
    if (!d.is_power())
        throw Error(Errc::invalid_argument, "closed form holds for power densities only");
    const double s = a + r;
    return d.p() / (s * s * s * s) * (a / (r * r)) * (r * r - a * a);
}

inline constexpr double quadrant_tol = 1e-9;

inline bool strictly_second_quadrant(const UnitVector& v) noexcept { return v.ux() < -quadrant_tol && v.uy() > quadrant_tol; }
inline bool strictly_third_quadrant(const UnitVector& v) noexcept { return v.ux() < -quadrant_tol && v.uy() < -quadrant_tol; }

/// Outcome of an admissibility predicate with the data it was decided on.
struct Admissibility
{
    bool admissible = false;
    std::vector<bool> conditions; ///< one entry per numbered condition
    double a1 = 0.0;
    double r1 = 0.0;
    double r2 = 0.0;
    double x1_mirror = 0.0; ///< 2 a1 - x1
    double x_star = 0.0;

    [[nodiscard]] std::vector<int> failed() const
    {
        std::vector<int> out;
        for (std::size_t i = 0; i < conditions.size(); ++i)
            if (!conditions[i])
                out.push_back(static_cast<int>(i) + 1);
        return out;
    }
};

namespace detail
{
inline void check_pair(const Point2& p1, const Point2& p2, const UnitVector& v1, const UnitVector& v2)
{
    const double scale = std::max({1.0, std::abs(p1.y), std::abs(p2.y)});
    if (!(p1.y > 0.0) || std::abs(p1.y - p2.y) > 1e-12 * scale)
        throw Error(Errc::invalid_configuration, "points must share a positive height");
    if (!strictly_second_quadrant(v1))
        throw Error(Errc::invalid_configuration, "v1 must lie strictly in the second quadrant");
    if (!strictly_third_quadrant(v2))
        throw Error(Errc::invalid_configuration, "v2 must lie strictly in the third quadrant");
}
} // namespace detail

/// Abscissa where v2 is tangent to the circle about the origin through (x, p2.y).
inline double x_star(const Point2& p2, const UnitVector& v2)
{
    if (!(p2.y > 0.0))
        throw Error(Errc::invalid_argument, "height must be positive");
    if (v2.ux() == 0.0)
        throw Error(Errc::no_solution, "vertical direction has no tangency point");
    return -p2.y * v2.uy() / v2.ux();
}

inline Admissibility admissible_right(const Point2& p1, const Point2& p2, const UnitVector& v1, const UnitVector& v2)
{
    detail::check_pair(p1, p2, v1, v2);
    Admissibility out;
    const CanonicalCircle c1 = canonical_circle(p1, v1);
    const CanonicalCircle c2 = canonical_circle(p2, v2);
    out.a1 = c1.center_x;
    out.r1 = c1.radius;
    out.r2 = c2.radius;
    out.x1_mirror = 2.0 * out.a1 - p1.x;
    out.x_star = x_star(p2, v2);
    out.conditions = {out.a1 > out.r1, theta(v2) >= theta(v1.mirrored()), p1.x - out.a1 >= out.a1 - p2.x};
    out.admissible = std::all_of(out.conditions.begin(), out.conditions.end(), [](bool b) { return b; });
    return out;
}

inline Admissibility admissible_left(const Point2& p1, const Point2& p2, const UnitVector& v1, const UnitVector& v2)
{
    detail::check_pair(p1, p2, v1, v2);
    Admissibility out;
    const CanonicalCircle c1 = canonical_circle(p1, v1);
    const CanonicalCircle c2 = canonical_circle(p2, v2);
    out.a1 = c1.center_x;
    out.r1 = c1.radius;
    out.r2 = c2.radius;
    out.x1_mirror = 2.0 * out.a1 - p1.x;
    out.x_star = x_star(p2, v2);
    out.conditions = {out.a1 > 0.0 && out.a1 < out.r1, theta(v2) <= theta(v1.mirrored()), out.r2 <= out.r1,
                      p2.x >= out.x_star && p2.x <= out.x1_mirror};
    out.admissible = std::all_of(out.conditions.begin(), out.conditions.end(), [](bool b) { return b; });
    return out;
}

struct H1Comparison
{
    double first = 0.0;  ///< q1 . v1perp / |q1|^2
    double second = 0.0; ///< q2 . v2perp / |q2|^2
    [[nodiscard]] double margin() const noexcept { return first - second; }
    [[nodiscard]] bool first_greater(double tol = 0.0) const noexcept { return margin() > tol; }
    [[nodiscard]] bool second_greater(double tol = 0.0) const noexcept { return -margin() > tol; }
};

inline H1Comparison h1_compare(const Point2& p1, const Point2& p2, const UnitVector& v1, const UnitVector& v2)
{
    const RadialDensity unit = RadialDensity::power(1.0);
    return {h1_value(p1, v1.clockwise(), unit), h1_value(p2, v2.clockwise(), unit)};
}

/// Samples of a graph over a common grid: value, slope and upward curvature.
struct GraphSample
{
    double x = 0.0;
    double value = 0.0;
    double slope = 0.0;
    double curvature = 0.0;
};

struct CurvatureComparison
{
    bool hypotheses_met = false;
    std::string failed_hypothesis;
    bool f_below_g = false;
    bool angle_ordered = false;
    std::optional<std::size_t> first_violation;
    std::optional<double> strict_gap; ///< min angle gap left of the rightmost strictly smaller curvature
};

/// Numerical version of the graph comparison principle: if f and g are nondecreasing,
/// agree in order at the right end and kappa_f <= kappa_g, then f <= g and the tangent
/// angle of f dominates. Tangent angles of graphs are atan(slope).
inline CurvatureComparison curvature_comparison_check(const std::vector<GraphSample>& f, const std::vector<GraphSample>& g,
                                                      double tol = 1e-10)
{
    if (f.size() != g.size() || f.empty())
        throw Error(Errc::invalid_argument, "graph samples must share a non-empty grid");
    for (std::size_t i = 0; i < f.size(); ++i)
        if (std::abs(f[i].x - g[i].x) > tol * std::max(1.0, std::abs(f[i].x)))
            throw Error(Errc::invalid_argument, "graph samples must share a grid");

    CurvatureComparison out;
    const auto fail = [&](std::string why) {
        out.failed_hypothesis = std::move(why);
        return out;
    };
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (!std::isfinite(f[i].value) || !std::isfinite(g[i].value) || !std::isfinite(f[i].slope) || !std::isfinite(g[i].slope))
            return fail("finite values and slopes");
        if (f[i].value < -tol || g[i].value < -tol)
            return fail("nonnegative functions");
        if (f[i].slope < -tol || g[i].slope < -tol)
            return fail("nondecreasing functions");
        if (f[i].curvature > g[i].curvature + tol)
            return fail("curvature ordering");
    }
    const GraphSample& fe = f.back();
    const GraphSample& ge = g.back();
    if (fe.value > ge.value + tol || std::atan(fe.slope) < std::atan(ge.slope) - tol)
        return fail("ordering at the right end");
    out.hypotheses_met = true;

    out.f_below_g = true;
    out.angle_ordered = true;
    for (std::size_t i = 0; i < f.size(); ++i) {
        const bool below = f[i].value <= g[i].value + tol;
        const bool angled = std::atan(f[i].slope) >= std::atan(g[i].slope) - tol;
        out.f_below_g = out.f_below_g && below;
        out.angle_ordered = out.angle_ordered && angled;
        if ((!below || !angled) && !out.first_violation)
            out.first_violation = i;
    }
    // the ordering propagates leftwards from the right end, so the rightmost strict
    // curvature gap makes the angle ordering strict on everything to its left
    for (std::size_t k = f.size(); k-- > 0;) {
        if (f[k].curvature < g[k].curvature - tol) {
            if (k > 0) {
                double gap = std::numeric_limits<double>::infinity();
                for (std::size_t i = 0; i < k; ++i)
                    gap = std::min(gap, std::atan(f[i].slope) - std::atan(g[i].slope));
                out.strict_gap = gap;
            }
            break;
        }
    }
    return out;
}

/// A randomly generated pair of directed points at a common height.
struct PairConfiguration
{
    Point2 p1;
    Point2 p2;
    UnitVector v1;
    UnitVector v2;
};

struct SampledConfiguration
{
    PairConfiguration config;
    std::size_t rejections = 0;
};

/// Rejection sampler for right-admissible configurations: the first point is placed
/// on a canonical circle with a1 > R1, then v2 and x2 are drawn and filtered.
template <class Rng>
SampledConfiguration sample_right_admissible(Rng& rng)
{
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    SampledConfiguration out;
    for (;;) {
        const double r1 = 0.05 + 0.95 * unit(rng);
        const double a1 = r1 * (1.0 + 1e-6 + 2.0 * unit(rng));
        const double t1 = (0.02 + 0.96 * unit(rng)) * (pi / 2);
        const Point2 p1{a1 + r1 * std::cos(t1), r1 * std::sin(t1)};
        const UnitVector v1 = UnitVector::from_angle(pi / 2 + t1);
        const UnitVector v2 = UnitVector::from_angle(pi + (0.01 + 0.98 * unit(rng)) * (pi / 2));
        const double lo = 2.0 * a1 - p1.x;
        const double x2 = lo - 0.25 * r1 + (p1.x - lo + 0.25 * r1) * unit(rng);
        const Point2 p2{x2, p1.y};
        if (!strictly_second_quadrant(v1) || !strictly_third_quadrant(v2) || p2.norm2() == 0.0) {
            ++out.rejections;
            continue;
        }
        if (admissible_right(p1, p2, v1, v2).admissible) {
            out.config = {p1, p2, v1, v2};
            return out;
        }
        ++out.rejections;
    }
}

/// Rejection sampler for left-admissible configurations (0 < a1 < R1).
template <class Rng>
SampledConfiguration sample_left_admissible(Rng& rng)
{
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    SampledConfiguration out;
    for (;;) {
        const double r1 = 0.05 + 0.95 * unit(rng);
        const double a1 = r1 * (1e-3 + 0.998 * unit(rng));
        const double t1 = (0.02 + 0.96 * unit(rng)) * (pi / 2);
        const Point2 p1{a1 + r1 * std::cos(t1), r1 * std::sin(t1)};
        const UnitVector v1 = UnitVector::from_angle(pi / 2 + t1);
        const double top = theta(v1.mirrored());
        const UnitVector v2 = UnitVector::from_angle(pi + (0.005 + 0.99 * unit(rng)) * (top - pi));
        if (!strictly_second_quadrant(v1) || !strictly_third_quadrant(v2)) {
            ++out.rejections;
            continue;
        }
        const double xs = -p1.y * v2.uy() / v2.ux();
        const double hi = 2.0 * a1 - p1.x;
        const double x2 = xs + (hi - xs) * unit(rng);
        const Point2 p2{x2, p1.y};
        if (p2.norm2() > 0.0 && admissible_left(p1, p2, v1, v2).admissible) {
            out.config = {p1, p2, v1, v2};
            return out;
        }
        ++out.rejections;
    }
}

} // namespace rpiso
