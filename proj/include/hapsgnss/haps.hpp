// hapsgnss HAPS platforms
// Quasi-stationary stratospheric platforms on circular station-keeping
// tracks, and synthesis of their pseudoranges.
#pragma once

#include <hapsgnss/constants.hpp>
#include <hapsgnss/error_models.hpp>
#include <hapsgnss/geodesy.hpp>

#include <cmath>
#include <string>
#include <utility>

namespace hapsgnss {

inline constexpr double kDefaultHapsHeight = 20000.0; ///< [m]

struct HapsPlatform {
    std::string id;
    GeodeticCoord center{0.0, 0.0, kDefaultHapsHeight};
    double radius = 0.0;       ///< circle radius [m]
    double angular_rate = 0.0; ///< [rad/s]
    double phase = 0.0;        ///< angle at t = 0 [rad]
    double clock_offset = 0.0; ///< dT_HAPS [s]; always zero here
};

struct HapsMeasurement {
    std::string id;
    double pseudorange = 0.0;                 ///< [m]
    EcefVector position = EcefVector::Zero(); ///< platform at emission
};

/// Platform position at time t [s]: the circle is traced in the local
/// east/north plane of the center, starting due east at phase 0.
inline EcefVector haps_position(const HapsPlatform& platform, double t) {
    const EcefVector center = geodetic_to_ecef(platform.center);
    if (platform.radius == 0.0) {
        return center;
    }
    const Matrix3 r = ecef_to_local_rotation(platform.center);
    const double theta = platform.phase + platform.angular_rate * t;
    return center + platform.radius * (std::cos(theta) * r.row(0).transpose() +
                                       std::sin(theta) * r.row(1).transpose());
}

/// Signal transit time from a source fixed at `p_tx` (emission-time ECEF)
/// to `receiver`, accounting for Earth rotation during the flight.
inline double transit_time(const EcefVector& p_tx, const EcefVector& receiver) {
    double tau = (p_tx - receiver).norm() / kSpeedOfLight;
    for (int i = 0; i < 5; ++i) {
        tau = (earth_rotation_matrix(tau) * p_tx - receiver).norm() / kSpeedOfLight;
    }
    return tau;
}

/// Geometric range expressed in the reception-time frame.
inline double geometric_range(const EcefVector& p_tx, const EcefVector& receiver) {
    return kSpeedOfLight * transit_time(p_tx, receiver);
}

namespace haps_detail {

/// Emission-time platform position and geometric range for a signal
/// received at time t.
inline std::pair<EcefVector, double> emission_geometry(const HapsPlatform& platform,
                                                       const EcefVector& receiver, double t) {
    EcefVector pos = haps_position(platform, t);
    double tau = transit_time(pos, receiver);
    pos = haps_position(platform, t - tau);
    tau = transit_time(pos, receiver);
    return {pos, kSpeedOfLight * tau};
}

} // namespace haps_detail

/// Simulation-mode pseudorange: geometric range plus a Gaussian residual
/// that stands in for every other error term.
inline HapsMeasurement synth_pseudorange_sim(const HapsPlatform& platform,
                                             const EcefVector& receiver_truth, double t,
                                             double sigma, RandomStream& rng) {
    const auto [pos, range] = haps_detail::emission_geometry(platform, receiver_truth, t);
    return {platform.id, range + gaussian_error(sigma, rng), pos};
}

/// Experiment-mode pseudorange: as in simulation plus the receiver clock
/// offset dt_rx [s] scaled by c.
inline HapsMeasurement synth_pseudorange_exp(const HapsPlatform& platform,
                                             const EcefVector& receiver_truth, double dt_rx,
                                             double t, double sigma, RandomStream& rng) {
    const auto [pos, range] = haps_detail::emission_geometry(platform, receiver_truth, t);
    return {platform.id, range + kSpeedOfLight * dt_rx + gaussian_error(sigma, rng), pos};
}

} // namespace hapsgnss
