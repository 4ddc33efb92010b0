// hapsgnss single point positioning
//
// Iterative unweighted least squares over satellite and HAPS pseudoranges.
// Each iteration re-derives look angles from the current estimate, applies
// the elevation mask, corrects satellite pseudoranges (clock, troposphere,
// ionosphere), moves every source into the reception-time frame, and solves
// H·dx = b with b = p_c - ρ and H = [line-of-sight | 1]. The fourth element
// of dx is the receiver clock offset in meters.
#pragma once

#include <hapsgnss/atmosphere.hpp>
#include <hapsgnss/constants.hpp>
#include <hapsgnss/geodesy.hpp>
#include <hapsgnss/haps.hpp>
#include <hapsgnss/rinex.hpp>

#include <Eigen/Dense>

#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace hapsgnss {

enum class SourceKind { satellite, haps };

struct RangingMeasurement {
    SourceKind kind = SourceKind::satellite;
    int id = 0;                               ///< PRN for satellites, platform index for HAPS
    double pseudorange = 0.0;                 ///< raw pseudorange [m]
    EcefVector position = EcefVector::Zero(); ///< source at emission, emission-time frame
    double clock_offset = 0.0;                ///< satellite dT [s]; 0 for HAPS
};

struct SolverConfig {
    double elevation_mask_deg = 15.0;
    double threshold_m = 0.01;
    int max_iterations = 20;
    bool iono_correction = true;
    bool tropo_correction = true;
    StandardAtmosphere atmosphere{};
    /// The mask and atmospheric corrections engage only once the estimate's
    /// ellipsoidal height is within this many meters of the surface.
    double surface_window_m = 1.0e5;
    /// Starting estimate; the Earth center unless set.
    std::optional<EcefVector> initial_position;
};

enum class SolveStatus { converged, not_converged, insufficient_sources, degenerate_geometry };

inline std::string_view to_string(SolveStatus s) {
    switch (s) {
    case SolveStatus::converged: return "ok";
    case SolveStatus::not_converged: return "not_converged";
    case SolveStatus::insufficient_sources: return "insufficient_sources";
    case SolveStatus::degenerate_geometry: return "degenerate_geometry";
    }
    return "unknown";
}

/// Diagnostics of one least-squares iteration.
struct IterationTrace {
    EcefVector linearization_point = EcefVector::Zero();
    bool mask_active = false;
    std::vector<std::size_t> used; ///< indices into the measurement list
    double step_norm = 0.0;        ///< |dx(1:3)| [m]
};

struct PositionSolution {
    SolveStatus status = SolveStatus::insufficient_sources;
    EcefVector position = EcefVector::Zero();
    double clock_offset = 0.0;               ///< receiver dt [s]
    Matrix4 covariance = Matrix4::Zero();    ///< Q = (HᵀH)⁻¹ at the last linearization
    int iterations = 0;
    bool converged = false;
    std::vector<std::size_t> used;  ///< indices of the sources in the final solve
    std::vector<double> residuals;  ///< post-fit residuals of `used` [m]
    int n_sat = 0;
    int n_haps = 0;
    std::vector<IterationTrace> trace;
};

/// Pseudorange correction. Satellites: p + c·dT - d_trop - d_ion. HAPS
/// pseudoranges are returned unchanged; no atmospheric term ever touches them.
inline double correct_pseudorange(const RangingMeasurement& m, const GeodeticCoord& receiver,
                                  const LookAngles& look, const IonoParameters& iono, double gps_sow,
                                  const SolverConfig& cfg) {
    if (m.kind == SourceKind::haps) {
        return m.pseudorange;
    }
    double p = m.pseudorange + kSpeedOfLight * m.clock_offset;
    if (cfg.tropo_correction) {
        p -= saastamoinen_delay(receiver, std::max(look.elevation, kSaastamoinenMinElevation),
                                cfg.atmosphere);
    }
    if (cfg.iono_correction && look.elevation > 0.0) {
        p -= klobuchar_delay(iono, receiver, look.elevation, look.azimuth, gps_sow);
    }
    return p;
}

/// Rows [-(P - x)/|P - x|, 1] for each source position P (reception frame).
inline Eigen::MatrixX4d design_matrix(std::span<const EcefVector> sources, const EcefVector& receiver) {
    Eigen::MatrixX4d h(static_cast<Eigen::Index>(sources.size()), 4);
    for (std::size_t i = 0; i < sources.size(); ++i) {
        const EcefVector los = sources[i] - receiver;
        const auto row = static_cast<Eigen::Index>(i);
        h.block<1, 3>(row, 0) = -(los / los.norm()).transpose();
        h(row, 3) = 1.0;
    }
    return h;
}

/// (HᵀH)⁻¹ through the SVD of H.
inline Matrix4 covariance_from_design(const Eigen::MatrixX4d& h) {
    const Eigen::JacobiSVD<Eigen::MatrixX4d> svd(h, Eigen::ComputeFullV);
    const Eigen::Vector4d s = svd.singularValues();
    const Eigen::Vector4d inv_s2 = s.cwiseProduct(s).cwiseInverse();
    return svd.matrixV() * inv_s2.asDiagonal() * svd.matrixV().transpose();
}

/// Condition number limit of HᵀH beyond which the geometry is rejected.
inline constexpr double kMaxNormalCondition = 1.0e12;

inline PositionSolution solve_epoch(std::span<const RangingMeasurement> measurements,
                                    const SolverConfig& cfg, const IonoParameters& iono,
                                    double gps_sow) {
    PositionSolution sol;
    EcefVector x = cfg.initial_position.value_or(EcefVector::Zero());
    double clock_m = 0.0;
    const double mask = cfg.elevation_mask_deg * kDegToRad;

    for (int iter = 1; iter <= cfg.max_iterations; ++iter) {
        sol.iterations = iter;
        IterationTrace step;
        step.linearization_point = x;

        GeodeticCoord geo;
        Matrix3 local = Matrix3::Identity();
        if (x.squaredNorm() > 0.0) {
            geo = ecef_to_geodetic(x);
            local = ecef_to_local_rotation(geo);
            step.mask_active = std::abs(geo.height) <= cfg.surface_window_m;
        }

        std::vector<EcefVector> rotated;
        std::vector<double> corrected;
        for (std::size_t i = 0; i < measurements.size(); ++i) {
            const RangingMeasurement& m = measurements[i];
            double p_c = m.pseudorange + kSpeedOfLight * m.clock_offset;
            if (step.mask_active) {
                if ((m.position - x).squaredNorm() == 0.0) {
                    continue;
                }
                const LookAngles look = elevation_azimuth(local, x, m.position);
                if (look.elevation < mask) {
                    continue;
                }
                p_c = correct_pseudorange(m, geo, look, iono, gps_sow, cfg);
            }
            const double transit = p_c / kSpeedOfLight;
            if (!(transit >= 0.0 && transit < 1.0)) {
                continue;
            }
            const EcefVector p_rx = sagnac_rotate(m.position, transit);
            if ((p_rx - x).squaredNorm() == 0.0) {
                continue;
            }
            step.used.push_back(i);
            rotated.push_back(p_rx);
            corrected.push_back(p_c);
        }

        if (step.used.size() < 4) {
            sol.status = SolveStatus::insufficient_sources;
            sol.trace.push_back(std::move(step));
            return sol;
        }

        const Eigen::MatrixX4d h = design_matrix(rotated, x);
        Eigen::VectorXd b(static_cast<Eigen::Index>(rotated.size()));
        for (std::size_t k = 0; k < rotated.size(); ++k) {
            b(static_cast<Eigen::Index>(k)) = corrected[k] - (rotated[k] - x).norm();
        }

        const Eigen::JacobiSVD<Eigen::MatrixXd> svd(h, Eigen::ComputeThinU | Eigen::ComputeThinV);
        const Eigen::Vector4d s = svd.singularValues();
        const double ratio = s(3) > 0.0 ? s(0) / s(3) : std::numeric_limits<double>::infinity();
        if (!(ratio * ratio <= kMaxNormalCondition)) {
            sol.status = SolveStatus::degenerate_geometry;
            sol.trace.push_back(std::move(step));
            return sol;
        }
        const Eigen::Vector4d dx = svd.solve(b);
        const Eigen::Vector4d inv_s2 = s.cwiseProduct(s).cwiseInverse();
        sol.covariance = svd.matrixV() * inv_s2.asDiagonal() * svd.matrixV().transpose();

        x += dx.head<3>();
        clock_m = dx(3);
        step.step_norm = dx.head<3>().norm();

        const Eigen::VectorXd post = b - h * dx;
        sol.used = step.used;
        sol.residuals.assign(post.data(), post.data() + post.size());
        sol.trace.push_back(std::move(step));

        if (!x.allFinite()) {
            sol.status = SolveStatus::degenerate_geometry;
            return sol;
        }
        if (dx.head<3>().norm() < cfg.threshold_m) {
            sol.converged = true;
            break;
        }
    }

    sol.position = x;
    sol.clock_offset = clock_m / kSpeedOfLight;
    sol.status = sol.converged ? SolveStatus::converged : SolveStatus::not_converged;
    sol.n_sat = 0;
    sol.n_haps = 0;
    for (const auto i : sol.used) {
        (measurements[i].kind == SourceKind::satellite ? sol.n_sat : sol.n_haps) += 1;
    }
    return sol;
}

/// A corrected satellite pseudorange paired with its emission-time position.
struct CorrectedRange {
    EcefVector position = EcefVector::Zero();
    double pseudorange = 0.0; ///< p_c [m]
};

/// Receiver clock offset [s] implied by known truth: the mean of
/// (p_c - ρ)/c over the given satellites.
inline double estimate_receiver_clock(const EcefVector& truth, std::span<const CorrectedRange> sats) {
    if (sats.empty()) {
        throw InvalidArgument("estimate_receiver_clock: no satellites");
    }
    double sum = 0.0;
    for (const auto& s : sats) {
        sum += s.pseudorange - geometric_range(s.position, truth);
    }
    return sum / static_cast<double>(sats.size()) / kSpeedOfLight;
}

} // namespace hapsgnss
