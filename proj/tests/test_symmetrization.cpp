#include "rpiso/measures.hpp"
#include "rpiso/shapes.hpp"
#include "rpiso/symmetrization.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>

using namespace rpiso;

namespace
{
double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

PolarRaster raster(const Shape& s, int size, int n = 3) { return rasterize(PolarRaster::uniform(n, 1.0, size, size), s.inside); }
} // namespace

TEST(CapAngle, Endpoints)
{
    for (int n : {3, 4, 7}) {
        EXPECT_EQ(cap_angle(0.0, n), 0.0);
        EXPECT_EQ(cap_angle(1.0, n), pi);
        EXPECT_NEAR(cap_angle(0.5, n), pi / 2, 1e-14);
    }
}

TEST(CapAngle, ThreeDimensions)
{
    EXPECT_NEAR(cap_angle(0.25, 3), pi / 3, 1e-14);
    EXPECT_THROW(cap_angle(1.5, 3), Error);
    EXPECT_THROW(cap_angle(-0.1, 3), Error);
}

TEST(CapAngle, InvertsCapFraction)
{
    for (int n : {3, 4, 5, 7})
        for (double a : {0.1, 0.7, 1.3, 2.0, 3.0})
            EXPECT_NEAR(cap_angle(cap_fraction(a, n), n), a, 1e-10);
    EXPECT_NEAR(cap_fraction(pi / 3, 3), 0.25, 1e-15);
}

TEST(Symmetrize, CentredBallUnchanged)
{
    for (double r : {0.75, 0.8}) {
        const PolarRaster e = raster(shapes::centered_ball(r), 128);
        EXPECT_EQ(symmetrize(e), e) << r;
    }
}

TEST(Symmetrize, HalfShellBecomesPolarCap)
{
    PolarRaster e = PolarRaster::uniform(3, 1.0, 16, 64);
    for (std::size_t i = 0; i < e.nr(); ++i)
        for (std::size_t j = 32; j < 64; ++j)
            e.at(i, j) = 1.0;
    const PolarRaster s = symmetrize(e);
    for (std::size_t i = 0; i < e.nr(); ++i)
        for (std::size_t j = 0; j < 64; ++j)
            EXPECT_NEAR(s.at(i, j), j < 32 ? 1.0 : 0.0, 1e-12);
}

TEST(Symmetrize, BallThroughOriginMovesOnlyBoundaryCells)
{
    // the ball is already a cap in every shell; only cells next to its partially
    // covered boundary may be repacked
    const PolarRaster e = raster(shapes::origin_ball(), 256);
    const PolarRaster s = symmetrize(e);
    const auto partial = [&](std::size_t i, std::size_t j) { return e.at(i, j) > 0.0 && e.at(i, j) < 1.0; };
    for (std::size_t i = 0; i < e.nr(); ++i)
        for (std::size_t j = 0; j < e.ntheta(); ++j) {
            if (s.at(i, j) == e.at(i, j))
                continue;
            const bool near_boundary = partial(i, j) || (j > 0 && partial(i, j - 1)) || (j + 1 < e.ntheta() && partial(i, j + 1));
            EXPECT_TRUE(near_boundary) << "cell " << i << ',' << j;
        }
}

TEST(Symmetrize, RadiallyPartialShellIsKept)
{
    PolarRaster e = PolarRaster::uniform(3, 1.0, 4, 8);
    for (std::size_t j = 0; j < 8; ++j)
        e.at(2, j) = 0.3;
    EXPECT_EQ(symmetrize(e), e);
}

TEST(Symmetrize, IdempotentAndVolumePreserving)
{
    const RadialDensity d = RadialDensity::power(1);
    for (const Shape& sh : shapes::corpus()) {
        const PolarRaster e = raster(sh, 128);
        const PolarRaster s = symmetrize(e);
        EXPECT_EQ(symmetrize(s), s) << sh.name;
        EXPECT_LE(rel(raster_measures(s, d).volume, raster_measures(e, d).volume), 1e-12) << sh.name;
    }
}

TEST(Symmetrize, RejectsBadOccupancy)
{
    PolarRaster e = PolarRaster::uniform(3, 1.0, 4, 4);
    e.at(1, 1) = 1.5;
    EXPECT_THROW(symmetrize(e), Error);
}

TEST(RasterMeasures, EmptyRaster)
{
    const MeasurePair m = raster_measures(PolarRaster::uniform(3, 1.0, 32, 32), RadialDensity::power(1));
    EXPECT_EQ(m.perimeter, 0.0);
    EXPECT_EQ(m.volume, 0.0);
}

TEST(RasterMeasures, CentredBallAgainstClosedForm)
{
    const RadialDensity d = RadialDensity::power(1);
    const MeasurePair m = raster_measures(raster(shapes::centered_ball(0.8), 1024), d);
    const MeasurePair c = centered_sphere_measures(0.8, 3, d);
    EXPECT_LE(rel(m.perimeter, c.perimeter), 5e-3);
    EXPECT_LE(rel(m.volume, c.volume), 5e-3);
}

TEST(RasterMeasures, BallThroughOriginAgainstQuadrature)
{
    for (int n : {3, 4}) {
        const RadialDensity d = RadialDensity::power(2);
        const MeasurePair m = raster_measures(raster(shapes::origin_ball(0.45), 1024, n), d);
        const MeasurePair o = origin_sphere_measures(0.45, n, d);
        EXPECT_LE(rel(m.perimeter, o.perimeter), 5e-3) << n;
        EXPECT_LE(rel(m.volume, o.volume), 5e-3) << n;
    }
}

TEST(RasterFiles, RoundTrip)
{
    const PolarRaster e = raster(shapes::cone(), 24, 4);
    const auto dir = std::filesystem::temp_directory_path();
    for (const char* name : {"rpiso_raster_test.bin", "rpiso_raster_test.csv"}) {
        const std::string path = (dir / name).string();
        save_raster(e, path);
        EXPECT_EQ(load_raster(path), e) << name;
        std::remove(path.c_str());
    }
}

TEST(RasterFiles, BinaryHeader)
{
    std::ostringstream os;
    write_raster_binary(PolarRaster::uniform(3, 1.0, 2, 3), os);
    const std::string b = os.str();
    EXPECT_EQ(b.substr(0, 4), "RPRS");
    EXPECT_EQ(b.size(), 4u + 4 + 4 + 4 + 4 + 8 * 3 + 8 * 4 + 8 * 6);
    std::istringstream bad("RPRX");
    EXPECT_THROW(read_raster_binary(bad), Error);
}
