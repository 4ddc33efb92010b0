// hapsgnss scenario runner
//
// Turns a Scenario into per-epoch measurement sets (synthesized in
// simulation mode, read from RINEX in experiment mode), solves every epoch
// for each configured system and renders the CSV outputs.
//
// Randomness is keyed by (master seed, role, epoch, source), so results do
// not depend on how epochs are scheduled across worker threads.
#pragma once

#include <hapsgnss/ephemeris.hpp>
#include <hapsgnss/error_models.hpp>
#include <hapsgnss/haps.hpp>
#include <hapsgnss/metrics.hpp>
#include <hapsgnss/rinex.hpp>
#include <hapsgnss/scenario.hpp>
#include <hapsgnss/spp.hpp>

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <optional>
#include <string>
#include <thread>
#include <vector>

namespace hapsgnss {

/// Stream roles for derive_seed.
enum class StreamRole : std::uint64_t { gauss_markov = 1, haps_noise = 2, los_gate = 3 };

inline RandomStream stream_for(std::uint64_t seed, StreamRole role, std::uint64_t epoch,
                               std::uint64_t source) {
    return RandomStream(derive_seed(seed, {static_cast<std::uint64_t>(role), epoch, source}));
}

/// Everything the solver sees at one epoch, plus the truth it is scored against.
struct EpochInputs {
    double epoch_s = 0.0;
    GpsTime time;
    std::optional<EcefVector> truth;
    std::vector<RangingMeasurement> satellites;
    std::vector<RangingMeasurement> haps; ///< only platforms available this epoch
};

/// Measurement list a given system configuration solves with.
inline std::vector<RangingMeasurement> assemble(SystemConfig system, const EpochInputs& in) {
    std::vector<RangingMeasurement> out;
    if (uses_gps(system)) {
        out = in.satellites;
    }
    for (const auto& h : in.haps) {
        if (system == SystemConfig::gps_only) {
            break;
        }
        if (system == SystemConfig::one_haps_gps && h.id != 0) {
            continue;
        }
        out.push_back(h);
    }
    return out;
}

/// Ellipsoid point beneath the mean platform position.
inline EcefVector platform_footprint(const std::vector<HapsPlatform>& platforms) {
    if (platforms.empty()) {
        throw InvalidArgument("platform_footprint: no platforms");
    }
    EcefVector sum = EcefVector::Zero();
    for (const auto& p : platforms) {
        sum += geodetic_to_ecef(p.center);
    }
    GeodeticCoord g = ecef_to_geodetic(sum / static_cast<double>(platforms.size()));
    g.height = 0.0;
    return geodetic_to_ecef(g);
}

/// Solver settings for one system. Without satellites, Newton started at
/// the Earth center diverges on a cluster of platforms a few tens of km
/// apart, so HAPS-only solves start beneath the platforms instead.
inline SolverConfig solver_for(SystemConfig system, const Scenario& s) {
    SolverConfig cfg = s.solver;
    if (!uses_gps(system) && !s.platforms.empty()) {
        cfg.initial_position = platform_footprint(s.platforms);
    }
    return cfg;
}

class EpochProvider {
public:
    virtual ~EpochProvider() = default;
    virtual std::size_t size() const = 0;
    /// Must be safe to call concurrently for distinct k.
    virtual EpochInputs inputs(std::size_t k) const = 0;
    virtual const IonoParameters& iono() const = 0;
};

namespace runner_detail {

inline EcefVector interpolate_waypoints(const std::vector<Waypoint>& wps, double t) {
    if (t <= wps.front().t) {
        return geodetic_to_ecef(wps.front().position);
    }
    if (t >= wps.back().t) {
        return geodetic_to_ecef(wps.back().position);
    }
    const auto it = std::upper_bound(wps.begin(), wps.end(), t,
                                     [](double v, const Waypoint& w) { return v < w.t; });
    const Waypoint& b = *it;
    const Waypoint& a = *(it - 1);
    const double f = (t - a.t) / (b.t - a.t);
    const GeodeticCoord g{a.position.lat + f * (b.position.lat - a.position.lat),
                          a.position.lon + f * (b.position.lon - a.position.lon),
                          a.position.height + f * (b.position.height - a.position.height)};
    return geodetic_to_ecef(g);
}

/// HAPS measurements for one epoch; the platform index becomes the source id.
inline std::vector<RangingMeasurement> haps_measurements(const Scenario& s, std::size_t k,
                                                         double epoch_s, const EcefVector& truth,
                                                         double receiver_clock_s) {
    std::vector<RangingMeasurement> out;
    if (s.platforms.empty()) {
        return out;
    }
    const Environment env = s.environment_at(epoch_s);
    const double sigma = s.haps_error.sigma(env);
    const Matrix3 local = ecef_to_local_rotation(ecef_to_geodetic(truth));
    for (std::size_t j = 0; j < s.platforms.size(); ++j) {
        const HapsPlatform& p = s.platforms[j];
        const LookAngles look = elevation_azimuth(local, truth, haps_position(p, epoch_s));
        if (look.elevation <= 0.0) {
            continue;
        }
        if (s.haps_error.los_gating) {
            RandomStream gate = stream_for(s.seed, StreamRole::los_gate, k, j);
            if (!los_gate(s.los_table(env), look.elevation, gate)) {
                continue;
            }
        }
        RandomStream noise = stream_for(s.seed, StreamRole::haps_noise, k, j);
        const HapsMeasurement m =
            receiver_clock_s == 0.0
                ? synth_pseudorange_sim(p, truth, epoch_s, sigma, noise)
                : synth_pseudorange_exp(p, truth, receiver_clock_s, epoch_s, sigma, noise);
        RangingMeasurement r;
        r.kind = SourceKind::haps;
        r.id = static_cast<int>(j);
        r.pseudorange = m.pseudorange;
        r.position = m.position;
        out.push_back(r);
    }
    return out;
}

} // namespace runner_detail

/// Synthetic measurements from an almanac and a waypoint trajectory.
class SimulationProvider final : public EpochProvider {
public:
    explicit SimulationProvider(const Scenario& s) : s_(s), iono_(s.iono.value_or(IonoParameters{})) {
        const std::size_t n = s_.epoch_count();
        // One Gauss-Markov process per PRN, stepped serially.
        for (const auto& eph : s_.constellation) {
            auto& series = gm_[eph.prn];
            if (!series.empty()) {
                continue;
            }
            GaussMarkovState gm = gm_init(s_.satellite_error.sigma, s_.satellite_error.tau,
                                          derive_seed(s_.seed, {static_cast<std::uint64_t>(StreamRole::gauss_markov),
                                                                static_cast<std::uint64_t>(eph.prn)}));
            series.reserve(n);
            series.push_back(gm.x);
            for (std::size_t k = 1; k < n; ++k) {
                series.push_back(gm_step(gm, s_.interval_s));
            }
        }
    }

    std::size_t size() const override { return s_.epoch_count(); }
    const IonoParameters& iono() const override { return iono_; }

    EpochInputs inputs(std::size_t k) const override {
        EpochInputs in;
        in.epoch_s = static_cast<double>(k) * s_.interval_s;
        in.time = s_.start + in.epoch_s;
        const EcefVector truth = runner_detail::interpolate_waypoints(s_.waypoints, in.epoch_s);
        in.truth = truth;
        const GeodeticCoord geo = ecef_to_geodetic(truth);
        const Matrix3 local = ecef_to_local_rotation(geo);

        for (const auto& eph : s_.constellation) {
            double tau = 0.075;
            EcefVector p_tx = EcefVector::Zero();
            for (int i = 0; i < 10; ++i) {
                p_tx = satellite_position(eph, in.time - tau);
                const double next = transit_time(p_tx, truth);
                const bool done = std::abs(next - tau) < 1e-13;
                tau = next;
                if (done) {
                    break;
                }
            }
            p_tx = satellite_position(eph, in.time - tau);
            const LookAngles look =
                elevation_azimuth(local, truth, earth_rotation_matrix(tau) * p_tx);
            if (look.elevation <= 0.0) {
                continue;
            }
            const double d_t = satellite_clock_offset(eph, in.time - tau, s_.relativistic_clock);
            double p = kSpeedOfLight * tau + kSpeedOfLight * (s_.receiver_clock_s - d_t);
            if (s_.simulate_iono) {
                p += klobuchar_delay(iono_, geo, look.elevation, look.azimuth, in.time.sow);
            }
            if (s_.simulate_tropo) {
                p += saastamoinen_delay(geo, std::max(look.elevation, kSaastamoinenMinElevation),
                                        s_.solver.atmosphere);
            }
            p += gm_.at(eph.prn)[k];

            RangingMeasurement m;
            m.kind = SourceKind::satellite;
            m.id = eph.prn;
            m.pseudorange = p;
            m.position = p_tx;
            m.clock_offset = d_t;
            in.satellites.push_back(m);
        }
        in.haps = runner_detail::haps_measurements(s_, k, in.epoch_s, truth, s_.receiver_clock_s);
        return in;
    }

private:
    const Scenario& s_;
    IonoParameters iono_;
    std::map<int, std::vector<double>> gm_;
};

struct TruthRow {
    double epoch_s = 0.0;
    EcefVector position = EcefVector::Zero();
};

/// Reads `epoch_s,x_m,y_m,z_m` rows; the first line is a header.
inline std::vector<TruthRow> parse_truth_csv(std::string_view text) {
    const auto lines = rinex_detail::split_lines(text);
    std::vector<TruthRow> rows;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto line = rinex_detail::trim(lines[i]);
        if (line.empty()) {
            continue;
        }
        std::array<double, 4> v{};
        std::size_t pos = 0;
        for (std::size_t c = 0; c < 4; ++c) {
            const std::size_t comma = c < 3 ? line.find(',', pos) : line.size();
            if (comma == std::string_view::npos) {
                throw ParseError("truth row needs 4 columns", i + 1);
            }
            const auto x = rinex_detail::real(line.substr(pos, comma - pos));
            if (!x || !std::isfinite(*x)) {
                throw ParseError("bad number in truth row", i + 1);
            }
            v[c] = *x;
            pos = comma + 1;
        }
        rows.push_back({v[0], EcefVector(v[1], v[2], v[3])});
    }
    std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.epoch_s < b.epoch_s; });
    return rows;
}

/// Recorded RINEX observations plus synthesized HAPS pseudoranges whose
/// clock term comes from the truth-based receiver clock estimate.
class ExperimentProvider final : public EpochProvider {
public:
    explicit ExperimentProvider(const Scenario& s) : s_(s) {
        obs_ = parse_observation(scenario_detail::read_file(s.experiment.obs_file));
        nav_ = parse_navigation(scenario_detail::read_file(s.experiment.nav_file));
        if (!std::filesystem::exists(s.experiment.truth_file)) {
            throw DataError("ground-truth file not found: " + s.experiment.truth_file.string());
        }
        truth_ = parse_truth_csv(scenario_detail::read_file(s.experiment.truth_file));
        if (s.iono) {
            iono_ = *s.iono;
        } else if (nav_.iono) {
            iono_ = *nav_.iono;
        } else {
            throw DataError("navigation header carries no ionospheric coefficients");
        }
        if (obs_.epochs.empty()) {
            throw DataError("observation file holds no usable epochs");
        }
        const double span = obs_.epochs.back().epoch - obs_.epochs.front().epoch;
        if (!s.timeline_covers(0.0, span)) {
            throw DataError("timeline does not cover the observation span");
        }
    }

    std::size_t size() const override { return obs_.epochs.size(); }
    const IonoParameters& iono() const override { return iono_; }
    const ObservationData& observations() const { return obs_; }

    EpochInputs inputs(std::size_t k) const override {
        const EpochObservation& ep = obs_.epochs[k];
        EpochInputs in;
        in.time = ep.epoch;
        in.epoch_s = ep.epoch - obs_.epochs.front().epoch;
        in.truth = truth_at(in.epoch_s);

        for (const auto& entry : ep.entries) {
            try {
                const BroadcastEphemeris& eph = select_ephemeris(nav_.ephemerides, entry.prn, ep.epoch);
                GpsTime t_tx = ep.epoch - entry.pseudorange / kSpeedOfLight;
                const double d_t = satellite_clock_offset(eph, t_tx, s_.relativistic_clock);
                t_tx = t_tx - d_t;
                RangingMeasurement m;
                m.kind = SourceKind::satellite;
                m.id = entry.prn;
                m.pseudorange = entry.pseudorange;
                m.position = satellite_position(eph, t_tx);
                m.clock_offset = d_t;
                in.satellites.push_back(m);
            } catch (const DataError&) {
                // no usable ephemeris for this PRN at this epoch
            }
        }

        if (in.truth && !s_.platforms.empty()) {
            const GeodeticCoord geo = ecef_to_geodetic(*in.truth);
            const Matrix3 local = ecef_to_local_rotation(geo);
            std::vector<CorrectedRange> above_mask;
            for (const auto& m : in.satellites) {
                const LookAngles look = elevation_azimuth(local, *in.truth, m.position);
                if (look.elevation < s_.solver.elevation_mask_deg * kDegToRad || look.elevation <= 0.0) {
                    continue;
                }
                above_mask.push_back(
                    {m.position, correct_pseudorange(m, geo, look, iono_, in.time.sow, s_.solver)});
            }
            if (!above_mask.empty()) {
                const double dt_rx = estimate_receiver_clock(*in.truth, above_mask);
                in.haps = runner_detail::haps_measurements(s_, k, in.epoch_s, *in.truth, dt_rx);
            }
        }
        return in;
    }

private:
    std::optional<EcefVector> truth_at(double epoch_s) const {
        const auto it = std::lower_bound(truth_.begin(), truth_.end(), epoch_s - 1e-3,
                                         [](const TruthRow& r, double v) { return r.epoch_s < v; });
        if (it != truth_.end() && std::abs(it->epoch_s - epoch_s) <= 1e-3) {
            return it->position;
        }
        return std::nullopt;
    }

    const Scenario& s_;
    ObservationData obs_;
    NavigationData nav_;
    std::vector<TruthRow> truth_;
    IonoParameters iono_;
};

inline std::unique_ptr<EpochProvider> make_provider(const Scenario& s) {
    if (s.mode == Mode::simulation) {
        return std::make_unique<SimulationProvider>(s);
    }
    return std::make_unique<ExperimentProvider>(s);
}

// -----------------------------------------------------------------------------
// Results
// -----------------------------------------------------------------------------

struct EpochRecord {
    double epoch_s = 0.0;
    std::string status;
    std::optional<EcefVector> position;
    std::optional<GeodeticCoord> geodetic;
    std::optional<double> clock_offset;
    int n_sat = 0;
    int n_haps = 0;
    int iterations = 0;
    std::optional<double> hdop, pdop, vdop, err3d;

    bool converged() const { return status == "ok"; }
};

struct SystemRun {
    SystemConfig system = SystemConfig::gps_only;
    std::vector<EpochRecord> epochs;

    std::vector<double> converged_errors() const {
        std::vector<double> out;
        for (const auto& e : epochs) {
            if (e.converged() && e.err3d) {
                out.push_back(*e.err3d);
            }
        }
        return out;
    }
};

struct RunResult {
    std::string scenario;
    std::vector<SystemRun> systems;

    const SystemRun& system(SystemConfig s) const {
        for (const auto& r : systems) {
            if (r.system == s) {
                return r;
            }
        }
        throw InvalidArgument("system not part of this run: " + std::string(to_string(s)));
    }
};

struct RunOptions {
    unsigned threads = 1;
    std::optional<std::uint64_t> seed_override;
};

inline EpochRecord make_record(const EpochInputs& in, std::span<const RangingMeasurement> used_list,
                               const PositionSolution& sol) {
    EpochRecord r;
    r.epoch_s = in.epoch_s;
    r.iterations = sol.iterations;
    if (sol.status == SolveStatus::insufficient_sources ||
        sol.status == SolveStatus::degenerate_geometry) {
        r.status = std::string(to_string(sol.status));
        if (!sol.trace.empty()) {
            for (const auto i : sol.trace.back().used) {
                (used_list[i].kind == SourceKind::satellite ? r.n_sat : r.n_haps) += 1;
            }
        }
        return r;
    }
    r.status = std::string(to_string(sol.status));
    r.position = sol.position;
    r.geodetic = ecef_to_geodetic(sol.position);
    r.clock_offset = sol.clock_offset;
    r.n_sat = sol.n_sat;
    r.n_haps = sol.n_haps;
    const Matrix3 local = covariance_to_local(sol.covariance, *r.geodetic);
    r.hdop = hdop(local);
    r.pdop = pdop(local);
    r.vdop = vdop(local);
    if (in.truth) {
        r.err3d = error_3d(sol.position, *in.truth);
    } else {
        r.status = "no_truth";
    }
    return r;
}

/// Runs `fn(k)` for k in [0, n) on `threads` workers. Exceptions are
/// rethrown on the caller's thread.
template <typename Fn>
void parallel_for(std::size_t n, unsigned threads, Fn&& fn) {
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
    if (threads == 1) {
        for (std::size_t k = 0; k < n; ++k) {
            fn(k);
        }
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < threads; ++w) {
        pool.emplace_back([&] {
            for (std::size_t k = next++; k < n; k = next++) {
                try {
                    fn(k);
                } catch (...) {
                    const std::lock_guard lock(error_mutex);
                    if (!error) {
                        error = std::current_exception();
                    }
                }
            }
        });
    }
    for (auto& t : pool) {
        t.join();
    }
    if (error) {
        std::rethrow_exception(error);
    }
}

inline RunResult run_scenario(const Scenario& scenario_in, const RunOptions& opts = {}) {
    Scenario scenario = scenario_in;
    if (opts.seed_override) {
        scenario.seed = *opts.seed_override;
    }
    const auto provider = make_provider(scenario);
    const std::size_t n = provider->size();

    RunResult result;
    result.scenario = scenario.name;
    for (auto sys : scenario.systems) {
        result.systems.push_back({sys, std::vector<EpochRecord>(n)});
    }
    std::vector<SolverConfig> configs;
    for (const auto& run : result.systems) {
        configs.push_back(solver_for(run.system, scenario));
    }
    parallel_for(n, opts.threads, [&](std::size_t k) {
        const EpochInputs in = provider->inputs(k);
        for (std::size_t i = 0; i < result.systems.size(); ++i) {
            auto& run = result.systems[i];
            const auto list = assemble(run.system, in);
            const PositionSolution sol = solve_epoch(list, configs[i], provider->iono(), in.time.sow);
            run.epochs[k] = make_record(in, list, sol);
        }
    });
    return result;
}

// -----------------------------------------------------------------------------
// CSV rendering
// -----------------------------------------------------------------------------

/// 17 significant digits, '.' decimal separator.
inline std::string format_real(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string format_optional(const std::optional<double>& v) {
    return v ? format_real(*v) : std::string();
}

inline constexpr std::string_view kEpochCsvHeader =
    "epoch_s,status,x_m,y_m,z_m,lat_deg,lon_deg,h_m,dt_s,n_sat,n_haps,iterations,hdop,pdop,vdop,err3d_m";

inline std::string epochs_csv(const SystemRun& run) {
    std::string out(kEpochCsvHeader);
    out += '\n';
    for (const auto& e : run.epochs) {
        std::optional<double> x, y, z, lat, lon, h;
        if (e.position) {
            x = e.position->x();
            y = e.position->y();
            z = e.position->z();
        }
        if (e.geodetic) {
            lat = e.geodetic->lat * kRadToDeg;
            lon = e.geodetic->lon * kRadToDeg;
            h = e.geodetic->height;
        }
        out += format_real(e.epoch_s) + ',' + e.status + ',' + format_optional(x) + ',' +
               format_optional(y) + ',' + format_optional(z) + ',' + format_optional(lat) + ',' +
               format_optional(lon) + ',' + format_optional(h) + ',' + format_optional(e.clock_offset) +
               ',' + std::to_string(e.n_sat) + ',' + std::to_string(e.n_haps) + ',' +
               std::to_string(e.iterations) + ',' + format_optional(e.hdop) + ',' +
               format_optional(e.pdop) + ',' + format_optional(e.vdop) + ',' +
               format_optional(e.err3d) + '\n';
    }
    return out;
}

/// `system,value_m,cum_prob` over converged epochs' 3D errors.
inline std::string cdf_csv(const RunResult& result) {
    std::string out = "system,value_m,cum_prob\n";
    for (const auto& run : result.systems) {
        const auto errors = run.converged_errors();
        if (errors.empty()) {
            continue;
        }
        const CdfSeries c(errors);
        for (std::size_t i = 0; i < c.size(); ++i) {
            out += std::string(to_string(run.system)) + ',' + format_real(c.values()[i]) + ',' +
                   format_real(c.probabilities()[i]) + '\n';
        }
    }
    return out;
}

struct SystemSummary {
    SystemConfig system = SystemConfig::gps_only;
    std::size_t epochs = 0;
    std::size_t converged = 0;
    double convergence_rate = 0.0;
    std::optional<double> median_err3d, p68_err3d, p95_err3d, mean_hdop;
};

inline SystemSummary summarize(const SystemRun& run) {
    SystemSummary s;
    s.system = run.system;
    s.epochs = run.epochs.size();
    double hdop_sum = 0.0;
    for (const auto& e : run.epochs) {
        if (e.converged()) {
            ++s.converged;
            hdop_sum += e.hdop.value_or(0.0);
        }
    }
    s.convergence_rate = s.epochs ? static_cast<double>(s.converged) / static_cast<double>(s.epochs) : 0.0;
    if (s.converged > 0) {
        s.mean_hdop = hdop_sum / static_cast<double>(s.converged);
    }
    const auto errors = run.converged_errors();
    if (!errors.empty()) {
        const CdfSeries c(errors);
        s.median_err3d = c.median();
        s.p68_err3d = c.percentile(0.68);
        s.p95_err3d = c.percentile(0.95);
    }
    return s;
}

inline std::string summary_csv(const RunResult& result) {
    std::string out = "system,epochs,converged,convergence_rate,median_err3d_m,p95_err3d_m,mean_hdop\n";
    for (const auto& run : result.systems) {
        const SystemSummary s = summarize(run);
        out += std::string(to_string(s.system)) + ',' + std::to_string(s.epochs) + ',' +
               std::to_string(s.converged) + ',' + format_real(s.convergence_rate) + ',' +
               format_optional(s.median_err3d) + ',' + format_optional(s.p95_err3d) + ',' +
               format_optional(s.mean_hdop) + '\n';
    }
    return out;
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw DataError("cannot write " + path.string());
    }
    out << text;
}

/// Writes epochs_<system>.csv, cdf.csv and summary.csv into `dir`.
inline void write_outputs(const RunResult& result, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    for (const auto& run : result.systems) {
        write_text(dir / ("epochs_" + std::string(to_string(run.system)) + ".csv"), epochs_csv(run));
    }
    write_text(dir / "cdf.csv", cdf_csv(result));
    write_text(dir / "summary.csv", summary_csv(result));
}

// -----------------------------------------------------------------------------
// Comparison across scenarios
// -----------------------------------------------------------------------------

struct ComparisonRow {
    std::string scenario;
    SystemSummary summary;
};

struct Comparison {
    std::vector<ComparisonRow> rows;
    std::vector<RunResult> runs;
};

/// Runs each scenario and tabulates CDF percentiles per (scenario, system).
/// All scenarios must share trajectory, seed and satellite error model.
inline Comparison compare_systems(const std::vector<Scenario>& scenarios, const RunOptions& opts = {}) {
    if (scenarios.empty()) {
        throw ScenarioError("compare needs at least one scenario");
    }
    const Scenario& ref = scenarios.front();
    for (const auto& s : scenarios) {
        if (s.mode != ref.mode || s.waypoints != ref.waypoints ||
            s.experiment.truth_file != ref.experiment.truth_file ||
            s.experiment.obs_file != ref.experiment.obs_file) {
            throw ScenarioError("mismatched trajectories between '" + ref.name + "' and '" + s.name + "'");
        }
        if (s.seed != ref.seed || !(s.satellite_error == ref.satellite_error)) {
            throw ScenarioError("scenarios '" + ref.name + "' and '" + s.name +
                                "' differ in seed or satellite error model");
        }
    }
    Comparison out;
    for (const auto& s : scenarios) {
        RunResult r = run_scenario(s, opts);
        for (const auto& run : r.systems) {
            out.rows.push_back({s.name, summarize(run)});
        }
        out.runs.push_back(std::move(r));
    }
    return out;
}

inline std::string comparison_csv(const Comparison& c) {
    std::string out = "scenario,system,epochs,convergence_rate,p50_err3d_m,p68_err3d_m,p95_err3d_m,mean_hdop\n";
    for (const auto& row : c.rows) {
        const auto& s = row.summary;
        out += row.scenario + ',' + std::string(to_string(s.system)) + ',' + std::to_string(s.epochs) +
               ',' + format_real(s.convergence_rate) + ',' + format_optional(s.median_err3d) + ',' +
               format_optional(s.p68_err3d) + ',' + format_optional(s.p95_err3d) + ',' +
               format_optional(s.mean_hdop) + '\n';
    }
    return out;
}

} // namespace hapsgnss
