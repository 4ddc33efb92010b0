// hapsgnss atmosphere
// Klobuchar ionosphere and Saastamoinen troposphere for L1 pseudoranges.
#pragma once

#include <hapsgnss/constants.hpp>
#include <hapsgnss/errors.hpp>
#include <hapsgnss/geodesy.hpp>
#include <hapsgnss/rinex.hpp>

#include <algorithm>
#include <cmath>

namespace hapsgnss {

struct AtmosphericDelays {
    double d_ion = 0.0;  ///< [m]
    double d_trop = 0.0; ///< [m]
};

/// Surface meteorology at sea level; values at the site follow a standard
/// lapse rate.
struct StandardAtmosphere {
    double pressure_hpa = 1013.25;
    double temperature_k = 291.15;
    double relative_humidity = 0.5;
};

/// Lowest elevation the Saastamoinen model is evaluated at [rad].
inline constexpr double kSaastamoinenMinElevation = 5.0 * kDegToRad;

/// L1 ionospheric delay [m] from the GPS-ICD single-frequency algorithm.
/// Angles are converted to semicircles internally.
inline double klobuchar_delay(const IonoParameters& iono, const GeodeticCoord& user,
                              double elevation, double azimuth, double gps_sow) {
    if (!(elevation > 0.0 && elevation <= kPi / 2 + 1e-12)) {
        throw InvalidArgument("klobuchar_delay: elevation must lie in (0, pi/2]");
    }
    const double el = elevation / kPi; // semicircles
    const double lat_u = user.lat / kPi;
    const double lon_u = user.lon / kPi;

    const double psi = 0.0137 / (el + 0.11) - 0.022;
    const double lat_i = std::clamp(lat_u + psi * std::cos(azimuth), -0.416, 0.416);
    const double lon_i = lon_u + psi * std::sin(azimuth) / std::cos(lat_i * kPi);
    const double lat_m = lat_i + 0.064 * std::cos((lon_i - 1.617) * kPi);

    double local_time = 4.32e4 * lon_i + gps_sow;
    local_time -= std::floor(local_time / 86400.0) * 86400.0;

    const double obliquity = 1.0 + 16.0 * std::pow(0.53 - el, 3);

    double amp = iono.alpha[0] + lat_m * (iono.alpha[1] + lat_m * (iono.alpha[2] + lat_m * iono.alpha[3]));
    double per = iono.beta[0] + lat_m * (iono.beta[1] + lat_m * (iono.beta[2] + lat_m * iono.beta[3]));
    amp = std::max(amp, 0.0);
    per = std::max(per, 72000.0);

    const double x = 2.0 * kPi * (local_time - 50400.0) / per;
    double delay_s = 5.0e-9;
    if (std::abs(x) < 1.57) {
        delay_s += amp * (1.0 - x * x / 2.0 + x * x * x * x / 24.0);
    }
    return kSpeedOfLight * obliquity * delay_s;
}

/// Total (hydrostatic + wet) tropospheric delay [m].
///
/// Pressure, temperature and water-vapour pressure at the site are derived
/// from the sea-level values in `atm`; the site height is clamped to
/// [-500, 30000] m where the standard-atmosphere formulas stay meaningful.
inline double saastamoinen_delay(const GeodeticCoord& user, double elevation,
                                 const StandardAtmosphere& atm = {}) {
    if (!(elevation >= kSaastamoinenMinElevation - 1e-12)) {
        throw InvalidArgument("elevation below model validity");
    }
    const double h = std::clamp(user.height, -500.0, 30000.0);
    const double pressure = atm.pressure_hpa * std::pow(1.0 - 2.2557e-5 * h, 5.2568);
    const double temperature = atm.temperature_k - 6.5e-3 * h;
    const double vapour = 6.108 * atm.relative_humidity *
                          std::exp((17.15 * temperature - 4684.0) / (temperature - 38.45));

    const double cos_z = std::sin(std::min(elevation, kPi / 2));
    const double hydrostatic = 0.0022768 * pressure /
                               (1.0 - 0.00266 * std::cos(2.0 * user.lat) - 0.00028 * h / 1e3) /
                               cos_z;
    const double wet = 0.002277 * (1255.0 / temperature + 0.05) * vapour / cos_z;
    return hydrostatic + wet;
}

} // namespace hapsgnss
