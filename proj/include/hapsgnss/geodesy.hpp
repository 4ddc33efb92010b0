// hapsgnss geodesy
// ECEF / geodetic conversions, the ECEF-to-local rotation, line-of-sight
// geometry and the Earth-rotation (Sagnac) correction.
#pragma once

#include <hapsgnss/constants.hpp>
#include <hapsgnss/errors.hpp>

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

namespace hapsgnss {

using EcefVector = Eigen::Vector3d; ///< Earth-centered Earth-fixed position [m]
using Matrix3 = Eigen::Matrix3d;
using Matrix4 = Eigen::Matrix4d;

/// Geodetic coordinates on the WGS-84 ellipsoid.
struct GeodeticCoord {
    double lat = 0.0;    ///< geodetic latitude [rad], [-π/2, π/2]
    double lon = 0.0;    ///< longitude [rad], (-π, π]
    double height = 0.0; ///< height above the ellipsoid [m]

    static GeodeticCoord from_degrees(double lat_deg, double lon_deg, double height_m) {
        return {lat_deg * kDegToRad, lon_deg * kDegToRad, height_m};
    }

    bool valid() const {
        return std::isfinite(lat) && std::isfinite(lon) && std::isfinite(height) &&
               std::abs(lat) <= kPi / 2 && lon > -kPi && lon <= kPi;
    }
};

/// Elevation and azimuth of a line of sight in the receiver's local frame.
struct LookAngles {
    double elevation = 0.0; ///< [rad], [-π/2, π/2]
    double azimuth = 0.0;   ///< [rad], [0, 2π), clockwise from north
};

inline EcefVector geodetic_to_ecef(const GeodeticCoord& g) {
    if (!g.valid()) {
        throw InvalidArgument("geodetic_to_ecef: coordinate out of range");
    }
    const double sin_lat = std::sin(g.lat);
    const double cos_lat = std::cos(g.lat);
    const double n = kWgs84A / std::sqrt(1.0 - kWgs84E2 * sin_lat * sin_lat);
    return {(n + g.height) * cos_lat * std::cos(g.lon),
            (n + g.height) * cos_lat * std::sin(g.lon),
            (n * (1.0 - kWgs84E2) + g.height) * sin_lat};
}

/// Iterative latitude solve; stops when the latitude update drops below
/// 1e-12 rad or after 10 iterations.
inline GeodeticCoord ecef_to_geodetic(const EcefVector& p) {
    if (!p.allFinite() || p.squaredNorm() == 0.0) {
        throw InvalidArgument("ecef_to_geodetic: position must be finite and non-zero");
    }
    const double rho = std::hypot(p.x(), p.y());
    double lon = std::atan2(p.y(), p.x());
    if (lon <= -kPi) {
        lon = kPi;
    }

    double lat = std::atan2(p.z(), rho * (1.0 - kWgs84E2));
    for (int i = 0; i < 10; ++i) {
        const double s = std::sin(lat);
        const double n = kWgs84A / std::sqrt(1.0 - kWgs84E2 * s * s);
        const double next = std::atan2(p.z() + n * kWgs84E2 * s, rho);
        const double change = std::abs(next - lat);
        lat = next;
        if (change < 1e-12) {
            break;
        }
    }
    const double s = std::sin(lat);
    const double height =
        rho * std::cos(lat) + p.z() * s - kWgs84A * std::sqrt(1.0 - kWgs84E2 * s * s);
    return {lat, lon, height};
}

/// Rotation taking ECEF vectors into the receiver's local frame.
/// Rows are east, north, up.
inline Matrix3 ecef_to_local_rotation(const GeodeticCoord& g) {
    const double sl = std::sin(g.lon), cl = std::cos(g.lon);
    const double sp = std::sin(g.lat), cp = std::cos(g.lat);
    Matrix3 r;
    r << -sl, cl, 0.0,
         -cl * sp, -sl * sp, cp,
         cl * cp, sl * cp, sp;
    return r;
}

/// Look angles with the receiver's local rotation already at hand.
inline LookAngles elevation_azimuth(const Matrix3& local_rotation, const EcefVector& receiver,
                                    const EcefVector& source) {
    const EcefVector los = source - receiver;
    const double range = los.norm();
    if (!(range > 0.0)) {
        throw InvalidArgument("elevation_azimuth: receiver and source coincide");
    }
    const Eigen::Vector3d local = local_rotation * (los / range);
    LookAngles out;
    out.elevation = std::asin(std::clamp(local.z(), -1.0, 1.0));
    double az = std::atan2(local.x(), local.y());
    if (az < 0.0) {
        az += 2.0 * kPi;
    }
    out.azimuth = az >= 2.0 * kPi ? 0.0 : az;
    return out;
}

inline LookAngles elevation_azimuth(const EcefVector& receiver, const EcefVector& source) {
    if ((source - receiver).squaredNorm() == 0.0) {
        throw InvalidArgument("elevation_azimuth: receiver and source coincide");
    }
    return elevation_azimuth(ecef_to_local_rotation(ecef_to_geodetic(receiver)), receiver, source);
}

/// Earth rotation over the signal transit time, about the z axis.
inline Matrix3 earth_rotation_matrix(double transit_s) {
    const double angle = kEarthRotationRate * transit_s;
    const double c = std::cos(angle), s = std::sin(angle);
    Matrix3 m;
    m << c, s, 0.0,
         -s, c, 0.0,
         0.0, 0.0, 1.0;
    return m;
}

/// Moves a source position from the emission-time ECEF frame into the
/// reception-time frame. transit_s must lie in [0, 1).
inline EcefVector sagnac_rotate(const EcefVector& p_tx, double transit_s) {
    if (!(transit_s >= 0.0 && transit_s < 1.0)) {
        throw InvalidArgument("sagnac_rotate: transit time outside [0, 1) s");
    }
    return earth_rotation_matrix(transit_s) * p_tx;
}

} // namespace hapsgnss
