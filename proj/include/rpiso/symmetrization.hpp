#pragma once

#include "rpiso/density.hpp"
#include "rpiso/error.hpp"
#include "rpiso/geometry.hpp"
#include "rpiso/measures.hpp"

#include <boost/math/special_functions/beta.hpp>

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

namespace rpiso
{

/// Axisymmetric region sampled on a polar grid (r, theta), theta measured from the
/// positive axis. Occupancy is stored row-major over r then theta.
struct PolarRaster
{
    int n = 3;
    std::vector<double> r_edges;
    std::vector<double> theta_edges;
    std::vector<double> occupancy;

    static PolarRaster uniform(int n, double r_max, int nr, int ntheta)
    {
        if (n < 3)
            throw Error(Errc::invalid_argument, "raster dimension must be at least 3");
        if (!(r_max > 0.0) || nr < 1 || ntheta < 1)
            throw Error(Errc::invalid_argument, "raster needs positive extent and sizes");
        PolarRaster out;
        out.n = n;
        out.r_edges.resize(static_cast<std::size_t>(nr) + 1);
        out.theta_edges.resize(static_cast<std::size_t>(ntheta) + 1);
        for (int i = 0; i <= nr; ++i)
            out.r_edges[i] = r_max * i / nr;
        for (int j = 0; j <= ntheta; ++j)
            out.theta_edges[j] = pi * j / ntheta;
        out.theta_edges.back() = pi;
        out.occupancy.assign(static_cast<std::size_t>(nr) * ntheta, 0.0);
        return out;
    }

    [[nodiscard]] std::size_t nr() const noexcept { return r_edges.empty() ? 0 : r_edges.size() - 1; }
    [[nodiscard]] std::size_t ntheta() const noexcept { return theta_edges.empty() ? 0 : theta_edges.size() - 1; }
    [[nodiscard]] double& at(std::size_t i, std::size_t j) { return occupancy[i * ntheta() + j]; }
    [[nodiscard]] double at(std::size_t i, std::size_t j) const { return occupancy[i * ntheta() + j]; }

    void validate() const
    {
        if (n < 3)
            throw Error(Errc::invalid_argument, "raster dimension must be at least 3");
        if (r_edges.size() < 2 || theta_edges.size() < 2 || occupancy.size() != nr() * ntheta())
            throw Error(Errc::invalid_argument, "raster sizes are inconsistent");
        if (r_edges.front() < 0.0 || theta_edges.front() < 0.0 || theta_edges.back() > pi)
            throw Error(Errc::invalid_argument, "raster extents out of range");
        for (std::size_t i = 1; i < r_edges.size(); ++i)
            if (!(r_edges[i] > r_edges[i - 1]))
                throw Error(Errc::invalid_argument, "radial grid must increase strictly");
        for (std::size_t j = 1; j < theta_edges.size(); ++j)
            if (!(theta_edges[j] > theta_edges[j - 1]))
                throw Error(Errc::invalid_argument, "angular grid must increase strictly");
        for (double v : occupancy)
            if (!(v >= 0.0 && v <= 1.0))
                throw Error(Errc::invalid_argument, "occupancy must lie in [0, 1]");
    }

    friend bool operator==(const PolarRaster&, const PolarRaster&) = default;
};

/// Normalised area of the polar cap of angle alpha on the unit (n-1)-sphere:
/// the ratio of the integral of sin^{n-2} over [0, alpha] to that over [0, pi].
inline double cap_fraction(double alpha, int n)
{
    if (n < 3)
        throw Error(Errc::invalid_argument, "dimension must be at least 3");
    if (!(alpha >= 0.0 && alpha <= pi))
        throw Error(Errc::invalid_argument, "cap angle must lie in [0, pi]");
    const double a = 0.5 * (n - 1);
    const auto lower = [a](double t) {
        const double s = std::sin(t);
        return 0.5 * boost::math::ibeta(a, 0.5, s * s);
    };
    return alpha <= pi / 2 ? lower(alpha) : 1.0 - lower(pi - alpha);
}

/// Normalised cap measure between two polar angles, accurate near both poles.
inline double cap_fraction_between(double t0, double t1, int n)
{
    if (t1 <= pi / 2)
        return cap_fraction(t1, n) - cap_fraction(t0, n);
    if (t0 >= pi / 2)
        return cap_fraction(pi - t0, n) - cap_fraction(pi - t1, n);
    return (0.5 - cap_fraction(t0, n)) + (0.5 - cap_fraction(pi - t1, n));
}

/// Inverse of cap_fraction.
inline double cap_angle(double fraction, int n)
{
    if (n < 3)
        throw Error(Errc::invalid_argument, "dimension must be at least 3");
    if (!(fraction >= 0.0 && fraction <= 1.0))
        throw Error(Errc::invalid_argument, "fraction must lie in [0, 1]");
    if (fraction == 0.0)
        return 0.0;
    if (fraction == 1.0)
        return pi;
    if (fraction > 0.5)
        return pi - cap_angle(1.0 - fraction, n);
    const double a = 0.5 * (n - 1);
    double c2 = 0.0;
    const double s2 = boost::math::ibeta_inv(a, 0.5, 2.0 * fraction, &c2);
    return std::atan2(std::sqrt(s2), std::sqrt(c2));
}

namespace detail
{
inline std::vector<double> angular_weights(const PolarRaster& e)
{
    std::vector<double> w(e.ntheta());
    for (std::size_t j = 0; j < w.size(); ++j)
        w[j] = cap_fraction_between(e.theta_edges[j], e.theta_edges[j + 1], e.n);
    return w;
}

/// A shell already packed as a cap: full cells, at most one partial cell, then empty.
inline bool is_cap_row(const double* row, std::size_t m)
{
    std::size_t j = 0;
    while (j < m && row[j] == 1.0)
        ++j;
    if (j < m && row[j] > 0.0)
        ++j;
    while (j < m && row[j] == 0.0)
        ++j;
    return j == m;
}

/// A shell with the same occupancy in every cell is only partially filled in r, and
/// the part that is filled covers whole spheres, so it is already symmetric.
inline bool is_uniform_row(const double* row, std::size_t m)
{
    return std::all_of(row, row + m, [&](double v) { return v == row[0]; });
}
} // namespace detail

/// Polar cap angle matching each shell's occupied measure.
inline std::vector<double> shell_cap_angles(const PolarRaster& e)
{
    e.validate();
    const std::vector<double> w = detail::angular_weights(e);
    std::vector<double> out(e.nr());
    for (std::size_t i = 0; i < e.nr(); ++i) {
        double total = 0.0;
        for (std::size_t j = 0; j < e.ntheta(); ++j)
            total += e.at(i, j) * w[j];
        out[i] = cap_angle(std::clamp(total, 0.0, 1.0), e.n);
    }
    return out;
}

/// Spherical symmetrization shell by shell: each shell's occupied cap measure is
/// repacked as a polar cap about theta = 0, ending in one fractional cell.
inline PolarRaster symmetrize(const PolarRaster& e)
{
    e.validate();
    const std::vector<double> w = detail::angular_weights(e);
    PolarRaster out = e;
    const std::size_t m = e.ntheta();
    for (std::size_t i = 0; i < e.nr(); ++i) {
        const double* row = &e.occupancy[i * m];
        if (detail::is_cap_row(row, m) || detail::is_uniform_row(row, m))
            continue;
        double total = 0.0;
        for (std::size_t j = 0; j < m; ++j)
            total += row[j] * w[j];
        double* dst = &out.occupancy[i * m];
        double filled = 0.0;
        for (std::size_t j = 0; j < m; ++j) {
            if (filled + w[j] <= total) {
                dst[j] = 1.0;
                filled += w[j];
            } else if (filled < total) {
                dst[j] = std::clamp((total - filled) / w[j], 0.0, 1.0);
                filled = total;
            } else
                dst[j] = 0.0;
        }
    }
    return out;
}

namespace detail
{
/// Length of the 0.5 level set of the occupancy, weighted by |y|^{n-2} r^p and
/// measured in the plane. Nodes are cell centres; angular ghosts mirror the first
/// and last rows across the axis, the inner radial ghost copies the first shell and
/// the outer radial ghost is empty.
inline double interface_integral(const PolarRaster& e, double p)
{
    const std::size_t nr = e.nr();
    const std::size_t nt = e.ntheta();
    std::vector<double> rc(nr + 2), tc(nt + 2);
    for (std::size_t i = 0; i < nr; ++i)
        rc[i + 1] = 0.5 * (e.r_edges[i] + e.r_edges[i + 1]);
    rc[0] = std::max(0.0, 2.0 * e.r_edges[0] - rc[1]);
    rc[nr + 1] = 2.0 * e.r_edges[nr] - rc[nr];
    for (std::size_t j = 0; j < nt; ++j)
        tc[j + 1] = 0.5 * (e.theta_edges[j] + e.theta_edges[j + 1]);
    tc[0] = -tc[1];
    tc[nt + 1] = 2.0 * pi - tc[nt];
    const auto raw = [&](std::ptrdiff_t i, std::ptrdiff_t j) {
        if (i >= static_cast<std::ptrdiff_t>(nr))
            return 0.0;
        i = std::max<std::ptrdiff_t>(i, 0);
        if (j < 0)
            j = -j - 1;
        if (j >= static_cast<std::ptrdiff_t>(nt))
            j = 2 * static_cast<std::ptrdiff_t>(nt) - j - 1;
        return e.at(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
    };
    // The 0.5 level of a raw area-fraction field wiggles across oblique interfaces and
    // the extra length does not vanish under refinement; a binomial blur removes it.
    std::vector<double> smooth((nr + 2) * (nt + 2));
    for (std::size_t gi = 0; gi < nr + 2; ++gi)
        for (std::size_t gj = 0; gj < nt + 2; ++gj) {
            const auto i = static_cast<std::ptrdiff_t>(gi) - 1;
            const auto j = static_cast<std::ptrdiff_t>(gj) - 1;
            double acc = 0.0;
            for (int a = -1; a <= 1; ++a)
                for (int b = -1; b <= 1; ++b)
                    acc += (a == 0 ? 2.0 : 1.0) * (b == 0 ? 2.0 : 1.0) * raw(i + a, j + b);
            smooth[gi * (nt + 2) + gj] = gi == nr + 1 ? 0.0 : acc / 16.0;
        }
    const auto value = [&](std::size_t gi, std::size_t gj) { return smooth[gi * (nt + 2) + gj]; };
    const auto map = [&](double r, double t) { return Point2{r * std::cos(t), r * std::sin(t)}; };
    const int n = e.n;
    double total = 0.0;
    const auto add = [&](Point2 a, Point2 b) {
        const Point2 mid = 0.5 * (a + b);
        const double r = mid.norm();
        const double wgt = std::pow(std::abs(mid.y), n - 2) * (r > 0.0 ? std::pow(r, p) : (p == 0.0 ? 1.0 : 0.0));
        total += (b - a).norm() * wgt;
    };
    constexpr double iso = 0.5;
    for (std::size_t gi = 0; gi + 1 < nr + 2; ++gi) {
        for (std::size_t gj = 0; gj + 1 < nt + 2; ++gj) {
            const std::array<double, 4> v{value(gi, gj), value(gi + 1, gj), value(gi + 1, gj + 1), value(gi, gj + 1)};
            int mask = 0;
            for (int k = 0; k < 4; ++k)
                if (v[k] >= iso)
                    mask |= 1 << k;
            if (mask == 0 || mask == 15)
                continue;
            const std::array<std::pair<double, double>, 4> corner{
                std::pair{rc[gi], tc[gj]}, std::pair{rc[gi + 1], tc[gj]}, std::pair{rc[gi + 1], tc[gj + 1]}, std::pair{rc[gi], tc[gj + 1]}};
            // Crossing on edge k (corner k to corner k+1), interpolated in (r, theta).
            const auto cross = [&](int k) {
                const int l = (k + 1) % 4;
                const double t = (iso - v[k]) / (v[l] - v[k]);
                const double r = corner[k].first + t * (corner[l].first - corner[k].first);
                const double th = corner[k].second + t * (corner[l].second - corner[k].second);
                return map(r, th);
            };
            std::array<Point2, 4> pts{};
            int count = 0;
            for (int k = 0; k < 4; ++k)
                if (((mask >> k) & 1) != ((mask >> ((k + 1) % 4)) & 1))
                    pts[count++] = cross(k);
            if (count == 2)
                add(pts[0], pts[1]);
            else if (count == 4) {
                const double centre = 0.25 * (v[0] + v[1] + v[2] + v[3]);
                const bool joined = (centre >= iso) == ((mask & 1) != 0);
                if (joined) {
                    add(pts[0], pts[1]);
                    add(pts[2], pts[3]);
                } else {
                    add(pts[0], pts[3]);
                    add(pts[1], pts[2]);
                }
            }
        }
    }
    return total;
}
} // namespace detail

/// Weighted volume (exact cell weights) and interface-based weighted perimeter.
inline MeasurePair raster_measures(const PolarRaster& e, const RadialDensity& d)
{
    e.validate();
    detail::require_power(d);
    const double p = d.p();
    const int n = e.n;
    const double ex = n + p;
    const std::vector<double> w = detail::angular_weights(e);
    const double sphere_angle = boost::math::beta(0.5 * (n - 1), 0.5);
    double volume = 0.0;
    for (std::size_t i = 0; i < e.nr(); ++i) {
        double shell = 0.0;
        for (std::size_t j = 0; j < e.ntheta(); ++j)
            shell += e.at(i, j) * w[j];
        volume += shell * (std::pow(e.r_edges[i + 1], ex) - std::pow(e.r_edges[i], ex)) / ex;
    }
    const double s = sphere_area(n - 2);
    return {s * detail::interface_integral(e, p), s * sphere_angle * volume};
}

/// Occupancy from a point predicate, by sub x sub midpoint samples per cell.
inline PolarRaster rasterize(PolarRaster grid, const std::function<bool(double, double)>& inside, int sub = 4)
{
    if (sub < 1)
        throw Error(Errc::invalid_argument, "subsampling must be positive");
    const std::size_t nt = grid.ntheta();
    std::vector<double> ct(nt * sub), st(nt * sub);
    for (std::size_t j = 0; j < nt; ++j)
        for (int b = 0; b < sub; ++b) {
            const double t = grid.theta_edges[j] + (b + 0.5) / sub * (grid.theta_edges[j + 1] - grid.theta_edges[j]);
            ct[j * sub + b] = std::cos(t);
            st[j * sub + b] = std::sin(t);
        }
    for (std::size_t i = 0; i < grid.nr(); ++i)
        for (std::size_t j = 0; j < nt; ++j) {
            int hits = 0;
            for (int a = 0; a < sub; ++a) {
                const double r = grid.r_edges[i] + (a + 0.5) / sub * (grid.r_edges[i + 1] - grid.r_edges[i]);
                for (int b = 0; b < sub; ++b)
                    hits += inside(r * ct[j * sub + b], r * st[j * sub + b]) ? 1 : 0;
            }
            grid.at(i, j) = static_cast<double>(hits) / (sub * sub);
        }
    return grid;
}

// Raster files.
//
// Binary layout, little-endian throughout:
//   char[4] "RPRS", uint32 version (1), int32 n, uint32 nr, uint32 ntheta,
//   float64 r_edges[nr + 1], float64 theta_edges[ntheta + 1],
//   float64 occupancy[nr * ntheta]  (row-major: r index outer, theta index inner)
//
// CSV layout: a "# polar raster v1" line, then "n,<n>", "nr,<nr>", "ntheta,<ntheta>",
// "r_edges,<...>", "theta_edges,<...>", followed by nr rows of ntheta values.

namespace detail
{
template <class T>
void put_le(std::ostream& os, T v)
{
    std::array<unsigned char, sizeof(T)> b{};
    std::memcpy(b.data(), &v, sizeof(T));
    if constexpr (std::endian::native == std::endian::big)
        std::reverse(b.begin(), b.end());
    os.write(reinterpret_cast<const char*>(b.data()), sizeof(T));
}

template <class T>
T get_le(std::istream& is)
{
    std::array<unsigned char, sizeof(T)> b{};
    if (!is.read(reinterpret_cast<char*>(b.data()), sizeof(T)))
        throw Error(Errc::io_error, "truncated raster file");
    if constexpr (std::endian::native == std::endian::big)
        std::reverse(b.begin(), b.end());
    T v;
    std::memcpy(&v, b.data(), sizeof(T));
    return v;
}

inline std::string fmt17(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::vector<double> parse_doubles(const std::string& line, std::size_t skip_fields)
{
    std::vector<double> out;
    std::stringstream ss(line);
    std::string field;
    std::size_t k = 0;
    while (std::getline(ss, field, ',')) {
        if (k++ < skip_fields)
            continue;
        try {
            out.push_back(std::stod(field));
        } catch (const std::exception&) {
            throw Error(Errc::io_error, "bad number '" + field + "' in raster file");
        }
    }
    return out;
}
} // namespace detail

inline void write_raster_binary(const PolarRaster& e, std::ostream& os)
{
    e.validate();
    os.write("RPRS", 4);
    detail::put_le<std::uint32_t>(os, 1);
    detail::put_le<std::int32_t>(os, e.n);
    detail::put_le<std::uint32_t>(os, static_cast<std::uint32_t>(e.nr()));
    detail::put_le<std::uint32_t>(os, static_cast<std::uint32_t>(e.ntheta()));
    for (double v : e.r_edges)
        detail::put_le(os, v);
    for (double v : e.theta_edges)
        detail::put_le(os, v);
    for (double v : e.occupancy)
        detail::put_le(os, v);
    if (!os)
        throw Error(Errc::io_error, "failed writing raster");
}

inline PolarRaster read_raster_binary(std::istream& is)
{
    char magic[4];
    if (!is.read(magic, 4) || std::memcmp(magic, "RPRS", 4) != 0)
        throw Error(Errc::io_error, "not a raster file");
    if (detail::get_le<std::uint32_t>(is) != 1)
        throw Error(Errc::io_error, "unsupported raster version");
    PolarRaster e;
    e.n = detail::get_le<std::int32_t>(is);
    const std::uint32_t nr = detail::get_le<std::uint32_t>(is);
    const std::uint32_t nt = detail::get_le<std::uint32_t>(is);
    if (nr == 0 || nt == 0 || static_cast<std::uint64_t>(nr) * nt > (1ull << 31))
        throw Error(Errc::io_error, "implausible raster size");
    e.r_edges.resize(nr + 1);
    e.theta_edges.resize(nt + 1);
    e.occupancy.resize(static_cast<std::size_t>(nr) * nt);
    for (double& v : e.r_edges)
        v = detail::get_le<double>(is);
    for (double& v : e.theta_edges)
        v = detail::get_le<double>(is);
    for (double& v : e.occupancy)
        v = detail::get_le<double>(is);
    e.validate();
    return e;
}

inline void write_raster_csv(const PolarRaster& e, std::ostream& os)
{
    e.validate();
    os << "# polar raster v1\n";
    os << "n," << e.n << "\nnr," << e.nr() << "\nntheta," << e.ntheta() << "\nr_edges";
    for (double v : e.r_edges)
        os << ',' << detail::fmt17(v);
    os << "\ntheta_edges";
    for (double v : e.theta_edges)
        os << ',' << detail::fmt17(v);
    os << '\n';
    for (std::size_t i = 0; i < e.nr(); ++i) {
        for (std::size_t j = 0; j < e.ntheta(); ++j)
            os << (j ? "," : "") << detail::fmt17(e.at(i, j));
        os << '\n';
    }
    if (!os)
        throw Error(Errc::io_error, "failed writing raster");
}

inline PolarRaster read_raster_csv(std::istream& is)
{
    std::string line;
    if (!std::getline(is, line) || line.rfind("# polar raster", 0) != 0)
        throw Error(Errc::io_error, "missing raster header");
    const auto field = [&](const char* key) {
        if (!std::getline(is, line) || line.rfind(key, 0) != 0)
            throw Error(Errc::io_error, std::string("expected '") + key + "' line");
        return detail::parse_doubles(line, 1);
    };
    PolarRaster e;
    e.n = static_cast<int>(field("n").at(0));
    const auto nr = static_cast<std::size_t>(field("nr").at(0));
    const auto nt = static_cast<std::size_t>(field("ntheta").at(0));
    e.r_edges = field("r_edges");
    e.theta_edges = field("theta_edges");
    if (e.r_edges.size() != nr + 1 || e.theta_edges.size() != nt + 1)
        throw Error(Errc::io_error, "edge counts disagree with header");
    e.occupancy.reserve(nr * nt);
    for (std::size_t i = 0; i < nr; ++i) {
        if (!std::getline(is, line))
            throw Error(Errc::io_error, "truncated raster rows");
        const std::vector<double> row = detail::parse_doubles(line, 0);
        if (row.size() != nt)
            throw Error(Errc::io_error, "raster row has the wrong length");
        e.occupancy.insert(e.occupancy.end(), row.begin(), row.end());
    }
    e.validate();
    return e;
}

inline void save_raster(const PolarRaster& e, const std::string& path)
{
    const bool csv = path.size() >= 4 && path.compare(path.size() - 4, 4, ".csv") == 0;
    std::ofstream os(path, csv ? std::ios::out : std::ios::out | std::ios::binary);
    if (!os)
        throw Error(Errc::io_error, "cannot open " + path);
    csv ? write_raster_csv(e, os) : write_raster_binary(e, os);
}

inline PolarRaster load_raster(const std::string& path)
{
    const bool csv = path.size() >= 4 && path.compare(path.size() - 4, 4, ".csv") == 0;
    std::ifstream is(path, csv ? std::ios::in : std::ios::in | std::ios::binary);
    if (!is)
        throw Error(Errc::io_error, "cannot open " + path);
    return csv ? read_raster_csv(is) : read_raster_binary(is);
}

} // namespace rpiso
