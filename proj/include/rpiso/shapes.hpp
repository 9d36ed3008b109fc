#pragma once

#include "rpiso/error.hpp"
#include "rpiso/geometry.hpp"

#include <cmath>
#include <functional>
#include <string>
#include <vector>

namespace rpiso
{

/// Axisymmetric test region given by its meridian section: x runs along the
/// symmetry axis, y >= 0 is the distance from it. All shapes fit in |q| < 1.
struct Shape
{
    std::string name;
    std::function<bool(double, double)> inside;
};

namespace shapes
{
inline bool in_disk(double x, double y, double cx, double cy, double r)
{
    return (x - cx) * (x - cx) + (y - cy) * (y - cy) < r * r;
}

inline Shape centered_ball(double r = 0.8)
{
    return {"centered-ball", [r](double x, double y) { return x * x + y * y < r * r; }};
}

inline Shape origin_ball(double a = 0.45)
{
    return {"origin-ball", [a](double x, double y) { return in_disk(x, y, a, 0.0, a); }};
}

/// Solid torus swept by an off-axis disk.
inline Shape torus() { return {"torus", [](double x, double y) { return in_disk(x, y, 0.1, 0.5, 0.3); }}; }

/// Cone about the negative axis, cut by a sphere.
inline Shape cone() { return {"cone", [](double x, double y) { return x * x + y * y < 0.81 && std::atan2(y, -x) < 0.6; }}; }

inline Shape shell() { return {"shell", [](double x, double y) { const double r2 = x * x + y * y; return r2 > 0.16 && r2 < 0.64; }}; }

inline Shape ellipsoid() { return {"ellipsoid", [](double x, double y) { return (x - 0.2) * (x - 0.2) / 0.36 + y * y / 0.09 < 1.0; }}; }

inline Shape two_balls()
{
    return {"two-balls", [](double x, double y) { return in_disk(x, y, 0.5, 0.0, 0.3) || in_disk(x, y, -0.4, 0.0, 0.35); }};
}

inline std::vector<Shape> corpus()
{
    return {centered_ball(), origin_ball(), torus(), cone(), shell(), ellipsoid(), two_balls()};
}

inline Shape by_name(const std::string& name)
{
    for (Shape s : corpus())
        if (s.name == name)
            return s;
    throw Error(Errc::invalid_argument, "unknown shape: " + name);
}
} // namespace shapes

} // namespace rpiso
