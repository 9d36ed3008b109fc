#pragma once

#include "rpiso/density.hpp"
#include "rpiso/error.hpp"
#include "rpiso/geometry.hpp"
#include "rpiso/shooting.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

namespace rpiso
{

/// Weighted (n-1)-area of the boundary and weighted n-volume.
struct MeasurePair
{
    double perimeter = 0.0;
    double volume = 0.0;
};

/// Area of the unit k-sphere in R^{k+1}.
inline double sphere_area(int k)
{
    if (k < 0)
        throw Error(Errc::invalid_argument, "sphere dimension must be nonnegative");
    const double h = 0.5 * (k + 1);
    return 2.0 * std::pow(pi, h) / boost::math::tgamma(h);
}

namespace detail
{
inline void require_power(const RadialDensity& d)
{
    if (!d.is_power())
        throw Error(Errc::invalid_argument, "measures are implemented for power densities");
}

inline void require_dimension(int n)
{
    if (n < 2)
        throw Error(Errc::invalid_argument, "dimension must be at least 2");
}

inline double integrate_1d(const auto& f, double a, double b, double rel_tol)
{
    double err = 0.0;
    double l1 = 0.0;
    const double v = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 15, rel_tol, &err, &l1);
    if (!(err <= std::max(10.0 * rel_tol * std::abs(v), 1e-300)))
        throw Error(Errc::quadrature_failure, "quadrature reached only " + std::to_string(err / std::max(std::abs(v), 1e-300)));
    return v;
}
} // namespace detail

/// Ball centred at the origin.
inline MeasurePair centered_sphere_measures(double radius, int n, const RadialDensity& d)
{
    detail::require_power(d);
    detail::require_dimension(n);
    if (!(radius > 0.0))
        throw Error(Errc::invalid_argument, "radius must be positive");
    const double p = d.p();
    const double s = sphere_area(n - 1);
    return {s * std::pow(radius, n - 1 + p), s * std::pow(radius, n + p) / (n + p)};
}

/// Ball of radius a centred at (a, 0), whose boundary passes through the origin.
/// In polar form the generating circle is r = 2a cos(theta).
inline MeasurePair origin_sphere_measures(double a, int n, const RadialDensity& d, double rel_tol = 1e-12)
{
    detail::require_power(d);
    detail::require_dimension(n);
    if (!(a > 0.0))
        throw Error(Errc::invalid_argument, "half-diameter must be positive");
    const double p = d.p();
    const double s = sphere_area(n - 2);
    // Boundary: (a + a cos t, a sin t), |gamma| = 2a cos(t/2), ds = a dt.
    const auto boundary = [&](double t) {
        const double y = a * std::sin(t);
        const double r = 2.0 * a * std::cos(0.5 * t);
        return std::pow(y, n - 2) * std::pow(r, p) * a;
    };
    const auto body = [&](double th) { return std::pow(std::sin(th), n - 2) * std::pow(2.0 * a * std::cos(th), n + p) / (n + p); };
    return {s * detail::integrate_1d(boundary, 0.0, pi, rel_tol), s * detail::integrate_1d(body, 0.0, pi / 2, rel_tol)};
}

/// Outcome of revolving a planar generating curve about the horizontal axis.
struct RevolvedMeasures
{
    MeasurePair measures;
    bool self_intersecting = false;
};

namespace detail
{
/// Integral over the polygon (closed through the axis) of r^{n+p-1} sin^{n-2}(theta)
/// dr dtheta, with winding weights. Rays from the origin are intersected exactly with
/// every edge and the radial integral is done in closed form; the angular integral is
/// a midpoint rule on `rows` rows.
inline double polar_volume(const std::vector<Point2>& poly, int n, double p, int rows)
{
    const double e = n + p;
    const std::size_t m = poly.size();
    double total = 0.0;
    std::vector<std::pair<double, int>> hits;
    for (int j = 0; j < rows; ++j) {
        const double th = (j + 0.5) * pi / rows;
        const Point2 dir{std::cos(th), std::sin(th)};
        hits.clear();
        for (std::size_t i = 0; i < m; ++i) {
            const Point2 a = poly[i];
            const Point2 b = poly[(i + 1) % m];
            const double ca = dir.cross(a);
            const double cb = dir.cross(b);
            if ((ca > 0.0) == (cb > 0.0))
                continue;
            const double t = ca / (ca - cb);
            const Point2 hit = a + t * (b - a);
            const double rho = hit.dot(dir);
            if (rho <= 0.0)
                continue;
            hits.emplace_back(rho, ca > 0.0 ? -1 : 1);
        }
        std::sort(hits.begin(), hits.end());
        // Winding about a point far along the ray is zero; accumulate inward.
        double shell = 0.0;
        int wind = 0;
        for (std::size_t k = hits.size(); k-- > 0;) {
            const double rho = hits[k].first;
            wind += hits[k].second;
            const double inner = k > 0 ? hits[k - 1].first : 0.0;
            shell += wind * (std::pow(rho, e) - std::pow(inner, e)) / e;
        }
        total += std::abs(shell) * std::pow(std::sin(th), n - 2);
    }
    return total * pi / rows;
}

inline bool segments_cross(Point2 a, Point2 b, Point2 c, Point2 d)
{
    const double d1 = (b - a).cross(c - a);
    const double d2 = (b - a).cross(d - a);
    const double d3 = (d - c).cross(a - c);
    const double d4 = (d - c).cross(b - c);
    return ((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0)) && d1 != 0 && d2 != 0 && d3 != 0 && d4 != 0;
}

/// Proper crossings between non-adjacent edges of an open polyline, bucketed on a grid.
inline bool has_self_intersection(const std::vector<Point2>& pts)
{
    if (pts.size() < 4)
        return false;
    double xmin = pts[0].x, xmax = pts[0].x, ymin = pts[0].y, ymax = pts[0].y;
    for (const Point2& q : pts) {
        xmin = std::min(xmin, q.x);
        xmax = std::max(xmax, q.x);
        ymin = std::min(ymin, q.y);
        ymax = std::max(ymax, q.y);
    }
    const int g = static_cast<int>(std::clamp(std::sqrt(static_cast<double>(pts.size())), 1.0, 256.0));
    const double wx = std::max(xmax - xmin, 1e-300) / g;
    const double wy = std::max(ymax - ymin, 1e-300) / g;
    std::vector<std::vector<std::size_t>> cells(static_cast<std::size_t>(g * g));
    const auto cell = [&](double v, double lo, double w) { return std::clamp(static_cast<int>((v - lo) / w), 0, g - 1); };
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        const int x0 = cell(std::min(pts[i].x, pts[i + 1].x), xmin, wx), x1 = cell(std::max(pts[i].x, pts[i + 1].x), xmin, wx);
        const int y0 = cell(std::min(pts[i].y, pts[i + 1].y), ymin, wy), y1 = cell(std::max(pts[i].y, pts[i + 1].y), ymin, wy);
        for (int cx = x0; cx <= x1; ++cx)
            for (int cy = y0; cy <= y1; ++cy)
                cells[static_cast<std::size_t>(cx * g + cy)].push_back(i);
    }
    for (const auto& bucket : cells)
        for (std::size_t u = 0; u < bucket.size(); ++u)
            for (std::size_t w = u + 1; w < bucket.size(); ++w) {
                const std::size_t i = bucket[u], j = bucket[w];
                if (j == i + 1 || i == j + 1)
                    continue;
                if (segments_cross(pts[i], pts[i + 1], pts[j], pts[j + 1]))
                    return true;
            }
    return false;
}

inline MeasurePair revolve_points(const std::vector<Point2>& pts, int n, double p, int rows, const auto& boundary_integral)
{
    std::vector<Point2> poly = pts;
    // Close through the axis: drop to the axis below each end.
    if (poly.back().y != 0.0)
        poly.push_back({poly.back().x, 0.0});
    if (poly.front().y != 0.0)
        poly.insert(poly.begin(), Point2{poly.front().x, 0.0});
    const double coarse = polar_volume(poly, n, p, rows / 2);
    const double fine = polar_volume(poly, n, p, rows);
    const double volume = (4.0 * fine - coarse) / 3.0;
    const double s = sphere_area(n - 2);
    return {s * boundary_integral(), s * volume};
}

inline void require_closed(const std::vector<Point2>& pts, double tol)
{
    if (pts.size() < 2)
        throw Error(Errc::invalid_argument, "curve needs at least two points");
    const auto on_axis = [tol](const Point2& q) { return std::abs(q.y) <= tol || q.norm() <= tol; };
    if (!on_axis(pts.front()) || !on_axis(pts.back()))
        throw Error(Errc::invalid_argument, "generating curve must start and end on the axis");
}
} // namespace detail

inline constexpr int default_revolve_rows = 2048;

/// Polyline in the closed upper half plane with both ends on the axis (or at the origin).
inline RevolvedMeasures revolve_measures(const std::vector<Point2>& polyline, int n, const RadialDensity& d,
                                         int rows = default_revolve_rows, double closure_tol = 1e-9)
{
    detail::require_power(d);
    detail::require_dimension(n);
    detail::require_closed(polyline, closure_tol);
    const double p = d.p();
    const auto boundary = [&]() {
        // 4-point Gauss-Legendre on every edge.
        double sum = 0.0;
        for (std::size_t i = 0; i + 1 < polyline.size(); ++i) {
            const Point2 a = polyline[i];
            const Point2 b = polyline[i + 1];
            const double len = (b - a).norm();
            if (len == 0.0)
                continue;
            const auto f = [&](double t) {
                const Point2 q = a + t * (b - a);
                const double r = q.norm();
                return std::pow(std::abs(q.y), n - 2) * (r > 0.0 ? std::pow(r, p) : (p == 0.0 ? 1.0 : 0.0));
            };
            sum += len * boost::math::quadrature::gauss<double, 4>::integrate(f, 0.0, 1.0);
        }
        return sum;
    };
    RevolvedMeasures out;
    out.measures = detail::revolve_points(polyline, n, p, rows, boundary);
    out.self_intersecting = detail::has_self_intersection(polyline);
    return out;
}

/// Revolve a closed shot curve. The boundary integral follows the Hermite interpolant
/// of the samples in arclength; the volume uses the sampled polygon.
inline RevolvedMeasures revolve_measures(const ShotCurve& curve, const RadialDensity& d, int rows = default_revolve_rows)
{
    const int n = curve.config.n;
    detail::require_power(d);
    if (!curve.origin_hit && !curve.axis_closed)
        throw Error(Errc::invalid_argument, "shot curve is not closed");
    // Subdivide each sample interval on the Hermite interpolant so chord sag stays
    // far below the volume tolerance.
    constexpr int subdivisions = 8;
    std::vector<Point2> pts;
    pts.reserve(curve.samples.size() * subdivisions + 1);
    pts.push_back(curve.samples.front().point());
    for (std::size_t i = 0; i + 1 < curve.samples.size(); ++i) {
        const double s0 = curve.samples[i].s;
        const double s1 = curve.samples[i + 1].s;
        for (int k = 1; k < subdivisions; ++k)
            pts.push_back(state_at(curve, s0 + (s1 - s0) * k / subdivisions).point());
        pts.push_back(curve.samples[i + 1].point());
    }
    if (curve.axis_closed)
        pts.push_back(curve.endpoint);
    const double p = d.p();
    const auto boundary = [&]() {
        double sum = 0.0;
        const auto f = [&](double s) {
            const CurveSample c = state_at(curve, s);
            const double r = std::hypot(c.x, c.y);
            return std::pow(std::max(c.y, 0.0), n - 2) * std::pow(r, p);
        };
        for (std::size_t i = 0; i + 1 < curve.samples.size(); ++i)
            sum += boost::math::quadrature::gauss<double, 7>::integrate(f, curve.samples[i].s, curve.samples[i + 1].s);
        if (curve.axis_closed) {
            const Point2 a = curve.samples.back().point();
            const Point2 b = curve.endpoint;
            const double len = (b - a).norm();
            const auto g = [&](double t) {
                const Point2 q = a + t * (b - a);
                return std::pow(std::max(q.y, 0.0), n - 2) * std::pow(q.norm(), p);
            };
            sum += len * boost::math::quadrature::gauss<double, 4>::integrate(g, 0.0, 1.0);
        }
        return sum;
    };
    RevolvedMeasures out;
    out.measures = detail::revolve_points(pts, n, p, rows, boundary);
    out.self_intersecting = detail::has_self_intersection(pts);
    return out;
}

struct IsoperimetricComparison
{
    int n = 3;
    double p = 0.0;
    double volume = 0.0;
    double origin_perimeter = 0.0;
    double centered_perimeter = 0.0;
    double origin_scale = 0.0;   ///< half-diameter a of the ball through the origin
    double centered_radius = 0.0;

    [[nodiscard]] double ratio() const noexcept { return origin_perimeter / centered_perimeter; }
};

/// Perimeters of the two ball families at a common weighted volume, using homogeneity
/// of degree n + p for volume and n - 1 + p for perimeter.
inline IsoperimetricComparison isoperimetric_compare(int n, const RadialDensity& d, double volume)
{
    detail::require_power(d);
    detail::require_dimension(n);
    if (!(volume > 0.0))
        throw Error(Errc::invalid_argument, "target volume must be positive");
    const double p = d.p();
    IsoperimetricComparison out;
    out.n = n;
    out.p = p;
    out.volume = volume;
    const MeasurePair c1 = centered_sphere_measures(1.0, n, d);
    out.centered_radius = std::pow(volume / c1.volume, 1.0 / (n + p));
    out.centered_perimeter = c1.perimeter * std::pow(out.centered_radius, n - 1 + p);
    const MeasurePair o1 = origin_sphere_measures(1.0, n, d);
    out.origin_scale = std::pow(volume / o1.volume, 1.0 / (n + p));
    out.origin_perimeter = o1.perimeter * std::pow(out.origin_scale, n - 1 + p);
    return out;
}

} // namespace rpiso
