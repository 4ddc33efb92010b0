#include "support.hpp"

#include <gtest/gtest.h>

using namespace hapsgnss;

namespace {

HapsPlatform platform(double radius) {
    HapsPlatform p;
    p.id = "test";
    p.center = GeodeticCoord::from_degrees(45.4275, -75.6920, kDefaultHapsHeight);
    p.radius = radius;
    p.angular_rate = 0.01;
    p.phase = 0.3;
    return p;
}

const EcefVector kReceiver = geodetic_to_ecef(GeodeticCoord::from_degrees(45.40, -75.70, 70.0));

} // namespace

TEST(Haps, ZeroRadiusIsStationary) {
    const auto p = platform(0.0);
    const EcefVector c = geodetic_to_ecef(p.center);
    for (double t : {0.0, 10.0, 1234.5}) {
        EXPECT_EQ(haps_position(p, t), c);
    }
}

TEST(Haps, OppositePhasesAreADiameterApart) {
    auto p = platform(1500.0);
    p.phase = 0.0;
    const double half_turn = kPi / p.angular_rate;
    const double d = (haps_position(p, 0.0) - haps_position(p, half_turn)).norm();
    EXPECT_NEAR(d, 3000.0, 3000.0 * 1e-6);
}

TEST(Haps, CircleStaysInCenterTangentPlane) {
    const auto p = platform(2000.0);
    const EcefVector c = geodetic_to_ecef(p.center);
    const EcefVector up = ecef_to_local_rotation(p.center).row(2).transpose();
    for (double t = 0.0; t < 700.0; t += 50.0) {
        const EcefVector pos = haps_position(p, t);
        EXPECT_NEAR((pos - c).norm(), 2000.0, 1e-6);
        EXPECT_NEAR((pos - c).dot(up), 0.0, 1e-6);
        const double rise = ecef_to_geodetic(pos).height - p.center.height;
        EXPECT_GE(rise, 0.0);
        EXPECT_LE(rise, 2000.0 * 2000.0 / (2 * 6.3e6));
    }
}

TEST(Haps, NoiselessSimulationIsGeometricRange) {
    const auto p = platform(1000.0);
    RandomStream rng(1);
    const auto m = synth_pseudorange_sim(p, kReceiver, 100.0, 0.0, rng);
    EXPECT_EQ(m.id, "test");
    EXPECT_NEAR(m.pseudorange, (m.position - kReceiver).norm(), 1e-3);
    EXPECT_DOUBLE_EQ(m.pseudorange, geometric_range(m.position, kReceiver));
    EXPECT_GT(m.pseudorange, 0.0);
    EXPECT_LT(m.pseudorange, 1e6);
}

TEST(Haps, DirectlyBelowIsHeightDifference) {
    const auto p = platform(0.0);
    GeodeticCoord below = p.center;
    below.height = 0.0;
    RandomStream rng(1);
    const auto m = synth_pseudorange_sim(p, geodetic_to_ecef(below), 0.0, 0.0, rng);
    EXPECT_NEAR(m.pseudorange, kDefaultHapsHeight, 1e-3);
}

TEST(Haps, ExperimentAddsClockTerm) {
    const auto p = platform(1000.0);
    RandomStream a(5), b(5);
    const auto sim = synth_pseudorange_sim(p, kReceiver, 10.0, 0.0, a);
    const auto none = synth_pseudorange_exp(p, kReceiver, 0.0, 10.0, 0.0, b);
    EXPECT_EQ(sim.pseudorange, none.pseudorange);
    RandomStream c(5);
    const auto clk = synth_pseudorange_exp(p, kReceiver, 1e-6, 10.0, 0.0, c);
    EXPECT_NEAR(clk.pseudorange - sim.pseudorange, 299.792458, 1e-6);
}

TEST(Haps, ResidualStatistics) {
    const auto p = platform(1000.0);
    for (double sigma : {2.0, 5.0}) {
        RandomStream rng(derive_seed(23, {static_cast<std::uint64_t>(sigma)}));
        double sum = 0.0, sum2 = 0.0;
        const int n = 100000;
        const double range = synth_pseudorange_sim(p, kReceiver, 0.0, 0.0, rng).pseudorange;
        for (int i = 0; i < n; ++i) {
            const double r = synth_pseudorange_exp(p, kReceiver, 3e-7, 0.0, sigma, rng).pseudorange -
                             range - kSpeedOfLight * 3e-7;
            sum += r;
            sum2 += r * r;
        }
        const double mean = sum / n;
        const double sd = std::sqrt(sum2 / n - mean * mean);
        EXPECT_NEAR(sd, sigma, 0.01 * sigma) << sigma;
        EXPECT_NEAR(mean, 0.0, 4.0 * sigma / std::sqrt(n)) << sigma;
    }
}

TEST(Haps, DowntownPlatformAboveEightyDegreesAtRouteEnd) {
    const auto s = testsupport::load("ottawa_suburban.toml");
    const HapsPlatform& downtown = s.platforms.front();
    EXPECT_EQ(downtown.id, "downtown");
    const EcefVector end = geodetic_to_ecef(s.waypoints.back().position);
    for (double t = 0.0; t <= 600.0; t += 30.0) {
        EXPECT_GT(elevation_azimuth(end, haps_position(downtown, t)).elevation, 80.0 * kDegToRad);
    }
}

TEST(Haps, ShippedPlatformsAboveFortyDegreesAlongRoute) {
    const auto s = testsupport::load("ottawa_suburban.toml");
    for (const auto& wp : s.waypoints) {
        const EcefVector rx = geodetic_to_ecef(wp.position);
        for (const auto& p : s.platforms) {
            EXPECT_GT(elevation_azimuth(rx, haps_position(p, wp.t)).elevation, 40.0 * kDegToRad) << p.id;
        }
    }
}
