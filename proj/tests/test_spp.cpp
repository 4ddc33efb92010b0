#include "support.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>

using namespace hapsgnss;
using testsupport::consistent_pseudorange;
using testsupport::source_at;

namespace {

const GeodeticCoord kUser = GeodeticCoord::from_degrees(45.4215, -75.6972, 70.0);
const EcefVector kTruth = geodetic_to_ecef(kUser);
constexpr double kClock = 2.5e-7;
const IonoParameters kIono{};

SolverConfig no_atmosphere() {
    SolverConfig cfg;
    cfg.iono_correction = false;
    cfg.tropo_correction = false;
    return cfg;
}

RangingMeasurement satellite(int prn, double el, double az, double dT = 0.0) {
    RangingMeasurement m;
    m.kind = SourceKind::satellite;
    m.id = prn;
    m.position = source_at(kUser, el, az, 2.1e7);
    m.clock_offset = dT;
    m.pseudorange = consistent_pseudorange(m.position, kTruth, kSpeedOfLight * kClock) - kSpeedOfLight * dT;
    return m;
}

RangingMeasurement haps(int id, double el, double az) {
    RangingMeasurement m;
    m.kind = SourceKind::haps;
    m.id = id;
    m.position = source_at(kUser, el, az, 20000.0 / std::sin(el * kDegToRad));
    m.pseudorange = consistent_pseudorange(m.position, kTruth, kSpeedOfLight * kClock);
    return m;
}

std::vector<RangingMeasurement> five_satellites() {
    return {satellite(1, 80, 10, 1e-4), satellite(2, 40, 70, -3e-5), satellite(3, 30, 160),
            satellite(4, 25, 250, 2e-6), satellite(5, 50, 320)};
}

} // namespace

TEST(CorrectPseudorange, SatelliteClockOnly) {
    RangingMeasurement m;
    m.pseudorange = 2.0e7;
    m.clock_offset = 1e-6;
    const LookAngles look{kPi / 2, 0.0};
    EXPECT_NEAR(correct_pseudorange(m, kUser, look, kIono, 0.0, no_atmosphere()), 2.0e7 + 299.792458, 1e-6);
}

TEST(CorrectPseudorange, SubtractsBothDelays) {
    RangingMeasurement m;
    m.pseudorange = 2.0e7;
    const LookAngles look{30 * kDegToRad, 1.0};
    SolverConfig cfg;
    const double expected =
        2.0e7 - saastamoinen_delay(kUser, look.elevation) - klobuchar_delay(kIono, kUser, look.elevation, 1.0, 5000.0);
    EXPECT_NEAR(correct_pseudorange(m, kUser, look, kIono, 5000.0, cfg), expected, 1e-6);
}

TEST(CorrectPseudorange, HapsUntouched) {
    RangingMeasurement m;
    m.kind = SourceKind::haps;
    m.pseudorange = 25000.0;
    m.clock_offset = 1e-3;
    EXPECT_EQ(correct_pseudorange(m, kUser, {0.5, 0.0}, kIono, 0.0, SolverConfig{}), 25000.0);
}

TEST(Solver, NoiselessFiveSatellites) {
    const auto ms = five_satellites();
    const auto sol = solve_epoch(ms, no_atmosphere(), kIono, 0.0);
    ASSERT_EQ(sol.status, SolveStatus::converged);
    EXPECT_LT((sol.position - kTruth).norm(), 0.02);
    EXPECT_LT(std::abs(sol.clock_offset - kClock), 1e-10);
    EXPECT_LE(sol.iterations, 10);
    EXPECT_EQ(sol.n_sat, 5);
    EXPECT_EQ(sol.n_haps, 0);
    for (double r : sol.residuals) {
        EXPECT_LT(std::abs(r), 1e-3);
    }
}

TEST(Solver, NoiselessMixedSources) {
    auto ms = five_satellites();
    ms.push_back(haps(0, 70, 45));
    ms.push_back(haps(1, 55, 200));
    const auto sol = solve_epoch(ms, no_atmosphere(), kIono, 0.0);
    ASSERT_EQ(sol.status, SolveStatus::converged);
    EXPECT_LT((sol.position - kTruth).norm(), 0.02);
    EXPECT_EQ(sol.n_haps, 2);
}

TEST(Solver, HapsOnlyFromNearbyStart) {
    std::vector<RangingMeasurement> ms{haps(0, 70, 0), haps(1, 60, 90), haps(2, 65, 180), haps(3, 75, 270)};
    SolverConfig cfg = no_atmosphere();
    GeodeticCoord ground = kUser;
    ground.height = 0.0;
    ground.lat += 1e-4;
    cfg.initial_position = geodetic_to_ecef(ground);
    const auto sol = solve_epoch(ms, cfg, kIono, 0.0);
    ASSERT_EQ(sol.status, SolveStatus::converged);
    EXPECT_LT((sol.position - kTruth).norm(), 0.02);
}

TEST(Solver, ThreeSourcesInsufficient) {
    auto ms = five_satellites();
    ms.resize(3);
    EXPECT_EQ(solve_epoch(ms, no_atmosphere(), kIono, 0.0).status, SolveStatus::insufficient_sources);
}

TEST(Solver, MaskCanLeaveTooFewSources) {
    std::vector<RangingMeasurement> ms{satellite(1, 80, 0), satellite(2, 10, 90), satellite(3, 12, 180),
                                       satellite(4, 60, 270), satellite(5, 8, 300)};
    const auto sol = solve_epoch(ms, no_atmosphere(), kIono, 0.0);
    EXPECT_EQ(sol.status, SolveStatus::insufficient_sources);
    EXPECT_TRUE(sol.trace.back().mask_active);
    EXPECT_FALSE(sol.trace.front().mask_active);
}

TEST(Solver, DuplicatedSourceIsDegenerate) {
    std::vector<RangingMeasurement> ms(5, satellite(1, 90, 0));
    EXPECT_EQ(solve_epoch(ms, no_atmosphere(), kIono, 0.0).status, SolveStatus::degenerate_geometry);
}

TEST(Solver, PermutationInvariant) {
    auto ms = five_satellites();
    ms.push_back(haps(0, 70, 45));
    const auto ref = solve_epoch(ms, SolverConfig{}, kIono, 0.0);
    std::mt19937 rng(3);
    for (int k = 0; k < 10; ++k) {
        std::shuffle(ms.begin(), ms.end(), rng);
        const auto sol = solve_epoch(ms, SolverConfig{}, kIono, 0.0);
        EXPECT_EQ(sol.status, ref.status);
        EXPECT_LT((sol.position - ref.position).norm(), 1e-6);
        EXPECT_NEAR(sol.clock_offset, ref.clock_offset, 1e-15);
    }
}

TEST(Solver, TraceRecordsMaskActivation) {
    const auto ms = five_satellites();
    const auto sol = solve_epoch(ms, no_atmosphere(), kIono, 0.0);
    ASSERT_GE(sol.trace.size(), 2u);
    EXPECT_EQ(sol.trace.front().linearization_point, EcefVector::Zero());
    EXPECT_FALSE(sol.trace.front().mask_active);
    EXPECT_TRUE(sol.trace.back().mask_active);
    EXPECT_EQ(static_cast<int>(sol.trace.size()), sol.iterations);
}

TEST(Solver, IterationCapReported) {
    SolverConfig cfg = no_atmosphere();
    cfg.max_iterations = 2;
    const auto sol = solve_epoch(five_satellites(), cfg, kIono, 0.0);
    EXPECT_EQ(sol.status, SolveStatus::not_converged);
    EXPECT_FALSE(sol.converged);
    EXPECT_EQ(sol.iterations, 2);
}

TEST(Solver, CovarianceSymmetricPositiveDefinite) {
    const auto sol = solve_epoch(five_satellites(), no_atmosphere(), kIono, 0.0);
    ASSERT_TRUE(sol.converged);
    EXPECT_TRUE(sol.covariance.isApprox(sol.covariance.transpose(), 1e-12));
    const Eigen::SelfAdjointEigenSolver<Matrix4> eig(sol.covariance);
    EXPECT_GT(eig.eigenvalues().minCoeff(), 0.0);
}

TEST(Solver, CovarianceMatchesNormalEquations) {
    std::vector<EcefVector> pos;
    for (const auto& m : five_satellites()) {
        pos.push_back(m.position);
    }
    const auto h = design_matrix(pos, kTruth);
    const Matrix4 direct = (h.transpose() * h).inverse();
    EXPECT_LT((covariance_from_design(h) - direct).norm(), 1e-9 * direct.norm());
}

TEST(Dop, ExtraRowNeverIncreasesHdop) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> el(10.0, 90.0), az(0.0, 360.0);
    for (int k = 0; k < 2000; ++k) {
        std::vector<EcefVector> sources;
        for (int i = 0; i < 5; ++i) {
            sources.push_back(source_at(kUser, el(rng), az(rng), 2.1e7));
        }
        const auto h = design_matrix(sources, kTruth);
        sources.push_back(source_at(kUser, el(rng), az(rng), 3.0e4));
        const auto h_plus = design_matrix(sources, kTruth);
        const double without = hdop(covariance_to_local(covariance_from_design(h), kUser));
        const double with = hdop(covariance_to_local(covariance_from_design(h_plus), kUser));
        EXPECT_LE(with, without + 1e-9);
    }
}

TEST(ReceiverClock, MeanOfResiduals) {
    std::vector<CorrectedRange> sats;
    for (const auto& m : five_satellites()) {
        sats.push_back({m.position, geometric_range(m.position, kTruth) + kSpeedOfLight * 1e-6});
    }
    EXPECT_NEAR(estimate_receiver_clock(kTruth, sats), 1e-6, 1e-15);
    sats[0].pseudorange += 5.0 * kSpeedOfLight * 1e-6;
    EXPECT_NEAR(estimate_receiver_clock(kTruth, sats), 2e-6, 1e-15);
    EXPECT_THROW(estimate_receiver_clock(kTruth, std::span<const CorrectedRange>{}), InvalidArgument);
}
