// hapsgnss broadcast ephemeris evaluation
// Satellite ECEF position and clock offset from GPS-ICD broadcast elements.
#pragma once

#include <hapsgnss/constants.hpp>
#include <hapsgnss/errors.hpp>
#include <hapsgnss/geodesy.hpp>
#include <hapsgnss/gps_time.hpp>
#include <hapsgnss/rinex.hpp>

#include <cmath>
#include <span>
#include <string>

namespace hapsgnss {

/// Maximum |t - toe| for which a broadcast record is used [s].
inline constexpr double kEphemerisValidity = 4.0 * 3600.0;

struct SatelliteState {
    int prn = 0;
    EcefVector position = EcefVector::Zero(); ///< at emission, before Earth-rotation correction
    double clock_offset = 0.0;                ///< dT [s]
};

/// Picks the record for `prn` whose toe is closest to `t`.
inline const BroadcastEphemeris& select_ephemeris(std::span<const BroadcastEphemeris> set, int prn,
                                                  const GpsTime& t) {
    const BroadcastEphemeris* best = nullptr;
    double best_gap = 0.0;
    for (const auto& eph : set) {
        if (eph.prn != prn) {
            continue;
        }
        const double gap = std::abs(t - eph.toe);
        if (best == nullptr || gap < best_gap) {
            best = &eph;
            best_gap = gap;
        }
    }
    if (best == nullptr) {
        throw DataError("no ephemeris for prn " + std::to_string(prn));
    }
    if (best_gap > kEphemerisValidity) {
        throw DataError("stale ephemeris for prn " + std::to_string(prn));
    }
    return *best;
}

/// Solves Kepler's equation E - e·sinE = M by Newton iteration seeded at M.
inline double solve_kepler(double mean_anomaly, double e) {
    double ecc_anomaly = mean_anomaly;
    for (int i = 0; i < 30; ++i) {
        const double f = ecc_anomaly - e * std::sin(ecc_anomaly) - mean_anomaly;
        const double step = f / (1.0 - e * std::cos(ecc_anomaly));
        ecc_anomaly -= step;
        if (std::abs(step) < 1e-12) {
            return ecc_anomaly;
        }
    }
    throw NumericalError("Kepler iteration did not converge");
}

namespace ephemeris_detail {

inline double time_from_toe(const BroadcastEphemeris& eph, const GpsTime& t) {
    const double tk = t - eph.toe;
    if (!(std::abs(tk) <= kEphemerisValidity)) {
        throw DataError("ephemeris evaluated outside its validity window");
    }
    return tk;
}

inline double eccentric_anomaly(const BroadcastEphemeris& eph, double tk) {
    const double a = eph.sqrt_a * eph.sqrt_a;
    const double n = std::sqrt(kEarthGravParam / (a * a * a)) + eph.delta_n;
    return solve_kepler(eph.m0 + n * tk, eph.e);
}

} // namespace ephemeris_detail

/// ECEF position at the given (emission) time, GPS-ICD user algorithm.
inline EcefVector satellite_position(const BroadcastEphemeris& eph, const GpsTime& t_tx) {
    const double tk = ephemeris_detail::time_from_toe(eph, t_tx);
    const double a = eph.sqrt_a * eph.sqrt_a;
    const double ea = ephemeris_detail::eccentric_anomaly(eph, tk);

    const double nu = std::atan2(std::sqrt(1.0 - eph.e * eph.e) * std::sin(ea),
                                 std::cos(ea) - eph.e);
    const double phi = nu + eph.omega;
    const double s2 = std::sin(2.0 * phi), c2 = std::cos(2.0 * phi);

    const double u = phi + eph.cus * s2 + eph.cuc * c2;
    const double r = a * (1.0 - eph.e * std::cos(ea)) + eph.crs * s2 + eph.crc * c2;
    const double inc = eph.i0 + eph.i_dot * tk + eph.cis * s2 + eph.cic * c2;

    const double x_orb = r * std::cos(u);
    const double y_orb = r * std::sin(u);
    const double node = eph.omega0 + (eph.omega_dot - kEarthRotationRate) * tk -
                        kEarthRotationRate * eph.toe.sow;
    const double cn = std::cos(node), sn = std::sin(node), ci = std::cos(inc);
    return {x_orb * cn - y_orb * ci * sn, x_orb * sn + y_orb * ci * cn, y_orb * std::sin(inc)};
}

/// Satellite clock offset dT [s]: clock polynomial about toc plus the
/// relativistic eccentricity term (dropped when include_relativistic is false).
inline double satellite_clock_offset(const BroadcastEphemeris& eph, const GpsTime& t,
                                     bool include_relativistic = true) {
    const double dt = t - eph.toc;
    double out = eph.af0 + eph.af1 * dt + eph.af2 * dt * dt;
    if (include_relativistic) {
        const double ea = ephemeris_detail::eccentric_anomaly(eph, ephemeris_detail::time_from_toe(eph, t));
        out += kRelativisticF * eph.e * eph.sqrt_a * std::sin(ea);
    }
    return out;
}

inline SatelliteState satellite_state(const BroadcastEphemeris& eph, const GpsTime& t_tx,
                                      bool include_relativistic = true) {
    return {eph.prn, satellite_position(eph, t_tx),
            satellite_clock_offset(eph, t_tx, include_relativistic)};
}

} // namespace hapsgnss
