#include <hapsgnss/atmosphere.hpp>

#include <gtest/gtest.h>

using namespace hapsgnss;

namespace {

const IonoParameters kIono{{1.1176e-08, 7.4506e-09, -5.9605e-08, -5.9605e-08},
                           {90112.0, 0.0, -196608.0, -65536.0}};

const GeodeticCoord kOttawa = GeodeticCoord::from_degrees(45.4215, -75.6972, 70.0);

// Local time at the pierce point is about 2 h after midnight.
double night_sow(const GeodeticCoord& user) { return 7200.0 - 43200.0 * (user.lon / kPi); }

} // namespace

TEST(Klobuchar, NightFloorAtZenith) {
    const double d = klobuchar_delay(kIono, kOttawa, kPi / 2, 0.0, night_sow(kOttawa));
    const double obliquity = 1.0 + 16.0 * std::pow(0.53 - 0.5, 3);
    EXPECT_NEAR(d, kSpeedOfLight * 5e-9 * obliquity, 1e-9);
    EXPECT_NEAR(d, kSpeedOfLight * 5e-9, 1e-3);
}

TEST(Klobuchar, LowElevationLargerThanZenith) {
    for (double sow : {night_sow(kOttawa), 50400.0 + 75.7 / 180.0 * 43200.0}) {
        const double low = klobuchar_delay(kIono, kOttawa, 15 * kDegToRad, 1.0, sow);
        const double zenith = klobuchar_delay(kIono, kOttawa, kPi / 2, 1.0, sow);
        EXPECT_GE(low, zenith);
    }
}

TEST(Klobuchar, DaytimePeakExceedsFloor) {
    // Local 14:00 at the user's longitude.
    const double sow = 50400.0 - 43200.0 * (kOttawa.lon / kPi);
    const double peak = klobuchar_delay(kIono, kOttawa, kPi / 2, 0.0, sow);
    EXPECT_GT(peak, kSpeedOfLight * 5e-9 * 1.001);
    EXPECT_LT(peak, 200.0);
}

TEST(Klobuchar, RejectsNonPositiveElevation) {
    EXPECT_THROW(klobuchar_delay(kIono, kOttawa, 0.0, 0.0, 0.0), InvalidArgument);
    EXPECT_THROW(klobuchar_delay(kIono, kOttawa, -0.1, 0.0, 0.0), InvalidArgument);
}

TEST(Klobuchar, PositiveAndBoundedEverywhere) {
    for (double lat = -85.0; lat <= 85.0; lat += 17.0) {
        for (double lon = -175.0; lon <= 175.0; lon += 35.0) {
            const auto user = GeodeticCoord::from_degrees(lat, lon, 0.0);
            for (double el = 5.0; el <= 90.0; el += 17.0) {
                for (double az = 0.0; az < 360.0; az += 60.0) {
                    for (double sow = 0.0; sow < 86400.0; sow += 7200.0) {
                        const double d = klobuchar_delay(kIono, user, el * kDegToRad, az * kDegToRad, sow);
                        ASSERT_GT(d, 0.0);
                        ASSERT_LE(d, 200.0);
                    }
                }
            }
        }
    }
}

TEST(Saastamoinen, SeaLevelZenith) {
    const double d = saastamoinen_delay({kOttawa.lat, kOttawa.lon, 0.0}, kPi / 2);
    EXPECT_GE(d, 2.3);
    EXPECT_LE(d, 2.5);
}

TEST(Saastamoinen, LowElevationLarger) {
    EXPECT_GT(saastamoinen_delay(kOttawa, 15 * kDegToRad), saastamoinen_delay(kOttawa, kPi / 2));
}

TEST(Saastamoinen, HigherSiteSmaller) {
    GeodeticCoord high = kOttawa;
    high.height = 5000.0;
    GeodeticCoord sea = kOttawa;
    sea.height = 0.0;
    EXPECT_LT(saastamoinen_delay(high, kPi / 2), saastamoinen_delay(sea, kPi / 2));
}

TEST(Saastamoinen, RejectsElevationBelowFloor) {
    try {
        saastamoinen_delay(kOttawa, 4.9 * kDegToRad);
        FAIL();
    } catch (const InvalidArgument& e) {
        EXPECT_STREQ(e.what(), "elevation below model validity");
    }
}

TEST(Saastamoinen, MonotoneAndBounded) {
    double prev = 1e9;
    for (double el = 5.0; el <= 90.0; el += 0.25) {
        const double d = saastamoinen_delay(kOttawa, el * kDegToRad);
        EXPECT_GT(d, 0.0);
        EXPECT_LE(d, 200.0);
        EXPECT_LE(d, prev);
        prev = d;
    }
}

TEST(Saastamoinen, AtmosphereOverride) {
    StandardAtmosphere dry;
    dry.relative_humidity = 0.0;
    EXPECT_LT(saastamoinen_delay(kOttawa, kPi / 2, dry), saastamoinen_delay(kOttawa, kPi / 2));
}
