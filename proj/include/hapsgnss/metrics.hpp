// hapsgnss metrics
// Local-frame covariance, dilution of precision, 3D error and empirical CDFs.
#pragma once

#include <hapsgnss/errors.hpp>
#include <hapsgnss/geodesy.hpp>

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

namespace hapsgnss {

/// Position block of Q rotated into the receiver's local (east, north, up)
/// frame: R·Q̃·Rᵀ with R from ecef_to_local_rotation.
inline Matrix3 covariance_to_local(const Matrix4& q, const GeodeticCoord& receiver) {
    const Matrix3 q_pos = q.topLeftCorner<3, 3>();
    const double scale = std::max(1.0, q_pos.cwiseAbs().maxCoeff());
    if (!q_pos.allFinite() || !q_pos.isApprox(q_pos.transpose(), 1e-9)) {
        throw InvalidArgument("covariance_to_local: covariance is not symmetric");
    }
    const Eigen::SelfAdjointEigenSolver<Matrix3> eig(q_pos, Eigen::EigenvaluesOnly);
    if (eig.eigenvalues().minCoeff() < -1e-9 * scale) {
        throw InvalidArgument("covariance_to_local: covariance is not positive semi-definite");
    }
    const Matrix3 r = ecef_to_local_rotation(receiver);
    return r * q_pos * r.transpose();
}

/// √(σ_e² + σ_n²): the two horizontal diagonal entries of the local covariance.
inline double hdop(const Matrix3& local_cov) { return std::sqrt(local_cov(0, 0) + local_cov(1, 1)); }

inline double vdop(const Matrix3& local_cov) { return std::sqrt(local_cov(2, 2)); }

inline double pdop(const Matrix3& local_cov) { return std::sqrt(local_cov.trace()); }

inline double error_3d(const EcefVector& est, const EcefVector& truth) { return (est - truth).norm(); }

/// Empirical cumulative distribution: sorted values with P(i) = i/N.
class CdfSeries {
public:
    explicit CdfSeries(std::span<const double> samples) : values_(samples.begin(), samples.end()) {
        if (values_.empty()) {
            throw InvalidArgument("cdf: no samples");
        }
        std::sort(values_.begin(), values_.end());
        const double n = static_cast<double>(values_.size());
        probs_.reserve(values_.size());
        for (std::size_t i = 0; i < values_.size(); ++i) {
            probs_.push_back(static_cast<double>(i + 1) / n);
        }
    }

    const std::vector<double>& values() const { return values_; }
    const std::vector<double>& probabilities() const { return probs_; }
    std::size_t size() const { return values_.size(); }

    /// Fraction of samples ≤ v (right-continuous step).
    double probability_at(double v) const {
        const auto it = std::upper_bound(values_.begin(), values_.end(), v);
        return static_cast<double>(it - values_.begin()) / static_cast<double>(values_.size());
    }

    /// Value at cumulative probability q, interpolated linearly between the
    /// points (P(i), x(i)); clamps below P(1).
    double percentile(double q) const {
        if (!(q >= 0.0 && q <= 1.0)) {
            throw InvalidArgument("percentile: q outside [0, 1]");
        }
        if (q <= probs_.front()) {
            return values_.front();
        }
        const auto it = std::lower_bound(probs_.begin(), probs_.end(), q);
        const std::size_t i = static_cast<std::size_t>(it - probs_.begin());
        if (i >= probs_.size()) {
            return values_.back();
        }
        const double p0 = probs_[i - 1], p1 = probs_[i];
        return values_[i - 1] + (values_[i] - values_[i - 1]) * (q - p0) / (p1 - p0);
    }

    double median() const { return percentile(0.5); }

private:
    std::vector<double> values_;
    std::vector<double> probs_;
};

inline CdfSeries cdf(std::span<const double> samples) { return CdfSeries(samples); }

} // namespace hapsgnss
