// hapsgnss constants
// GPS-ICD / WGS-84 values shared by every module.
#pragma once

namespace hapsgnss {

inline constexpr double kPi = 3.1415926535897932;
inline constexpr double kSpeedOfLight = 299792458.0;      ///< [m/s]
inline constexpr double kEarthRotationRate = 7.2921151467e-5; ///< ω_E [rad/s]
inline constexpr double kEarthGravParam = 3.986005e14;    ///< μ [m³/s²]
inline constexpr double kWgs84A = 6378137.0;              ///< semi-major axis [m]
inline constexpr double kWgs84F = 1.0 / 298.257223563;    ///< flattening
inline constexpr double kWgs84B = kWgs84A * (1.0 - kWgs84F);
inline constexpr double kWgs84E2 = kWgs84F * (2.0 - kWgs84F);

/// Relativistic clock correction constant F = -2√μ/c² [s/m^½]
inline constexpr double kRelativisticF = -4.442807633e-10;

inline constexpr double kSecondsPerWeek = 604800.0;
inline constexpr double kDegToRad = kPi / 180.0;
inline constexpr double kRadToDeg = 180.0 / kPi;

} // namespace hapsgnss
