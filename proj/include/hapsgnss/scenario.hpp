// hapsgnss scenario description
//
// A scenario is a TOML document. Keys carry their unit as a suffix
// (`_m`, `_s`, `_deg`, `_rad`, `_hpa`, `_k`); everything else is SI.
// Relative file paths resolve against the scenario file's directory.
#pragma once

#include <hapsgnss/atmosphere.hpp>
#include <hapsgnss/error_models.hpp>
#include <hapsgnss/errors.hpp>
#include <hapsgnss/geodesy.hpp>
#include <hapsgnss/gps_time.hpp>
#include <hapsgnss/haps.hpp>
#include <hapsgnss/rinex.hpp>
#include <hapsgnss/spp.hpp>

#include <toml.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace hapsgnss {

enum class Mode { simulation, experiment };

enum class SystemConfig { gps_only, one_haps_gps, four_haps_gps, four_haps_only };

inline std::string_view to_string(SystemConfig s) {
    switch (s) {
    case SystemConfig::gps_only: return "gps_only";
    case SystemConfig::one_haps_gps: return "one_haps_gps";
    case SystemConfig::four_haps_gps: return "four_haps_gps";
    case SystemConfig::four_haps_only: return "four_haps_only";
    }
    return "unknown";
}

inline std::optional<SystemConfig> parse_system(std::string_view s) {
    for (auto c : {SystemConfig::gps_only, SystemConfig::one_haps_gps, SystemConfig::four_haps_gps,
                   SystemConfig::four_haps_only}) {
        if (to_string(c) == s) {
            return c;
        }
    }
    return std::nullopt;
}

inline bool uses_gps(SystemConfig s) { return s != SystemConfig::four_haps_only; }

/// Number of HAPS platforms the configuration draws on.
inline std::size_t haps_demand(SystemConfig s) {
    switch (s) {
    case SystemConfig::gps_only: return 0;
    case SystemConfig::one_haps_gps: return 1;
    default: return 4;
    }
}

struct Waypoint {
    double t = 0.0; ///< seconds from scenario start
    GeodeticCoord position;
    bool operator==(const Waypoint& o) const {
        return t == o.t && position.lat == o.position.lat && position.lon == o.position.lon &&
               position.height == o.position.height;
    }
};

struct TimelineSegment {
    double start = 0.0; ///< [s]
    double end = 0.0;   ///< [s], exclusive except for the final segment
    Environment environment = Environment::suburban;
};

struct SatelliteErrorConfig {
    double sigma = 6.0; ///< [m]
    double tau = 10.0;  ///< [s]
    bool operator==(const SatelliteErrorConfig&) const = default;
};

struct HapsErrorConfig {
    double suburban_sigma = 2.0;    ///< [m]
    double dense_urban_sigma = 5.0; ///< [m]
    bool los_gating = false;

    double sigma(Environment env) const {
        return env == Environment::suburban ? suburban_sigma : dense_urban_sigma;
    }
};

struct ExperimentInputs {
    std::filesystem::path obs_file;
    std::filesystem::path nav_file;
    std::filesystem::path truth_file;
};

struct Scenario {
    std::string name;
    Mode mode = Mode::simulation;
    std::uint64_t seed = 0;
    std::vector<SystemConfig> systems;

    // Simulation timing and truth.
    GpsTime start;
    double duration_s = 0.0;
    double interval_s = 1.0;
    std::vector<Waypoint> waypoints;
    double receiver_clock_s = 0.0; ///< true receiver clock offset in simulation

    std::vector<BroadcastEphemeris> constellation; ///< simulation almanac
    std::optional<IonoParameters> iono;
    bool simulate_iono = true;
    bool simulate_tropo = true;
    bool relativistic_clock = true;

    SatelliteErrorConfig satellite_error;
    HapsErrorConfig haps_error;
    std::vector<TimelineSegment> timeline;
    std::map<Environment, LosProbabilityTable> los_tables;
    std::vector<HapsPlatform> platforms;
    SolverConfig solver;

    ExperimentInputs experiment;

    Environment environment_at(double t) const {
        for (std::size_t i = 0; i < timeline.size(); ++i) {
            const auto& seg = timeline[i];
            const bool last = i + 1 == timeline.size();
            if (t >= seg.start && (t < seg.end || (last && t <= seg.end))) {
                return seg.environment;
            }
        }
        throw DataError("timeline does not cover t = " + std::to_string(t) + " s");
    }

    bool timeline_covers(double t0, double t1) const {
        return !timeline.empty() && timeline.front().start <= t0 && timeline.back().end >= t1;
    }

    const LosProbabilityTable& los_table(Environment env) const {
        const auto it = los_tables.find(env);
        if (it == los_tables.end()) {
            static const LosProbabilityTable suburban =
                LosProbabilityTable::default_for(Environment::suburban);
            static const LosProbabilityTable dense =
                LosProbabilityTable::default_for(Environment::dense_urban);
            return env == Environment::suburban ? suburban : dense;
        }
        return it->second;
    }

    std::size_t epoch_count() const {
        return static_cast<std::size_t>(std::floor(duration_s / interval_s + 1e-9));
    }
};

/// Throws ScenarioError when the scenario breaks one of its invariants.
inline void validate(const Scenario& s) {
    auto fail = [](const std::string& why) { throw ScenarioError(why); };
    if (s.systems.empty()) {
        fail("no systems configured");
    }
    std::size_t demand = 0;
    for (auto sys : s.systems) {
        demand = std::max(demand, haps_demand(sys));
    }
    if (s.platforms.size() != demand) {
        fail("system configuration demands " + std::to_string(demand) + " HAPS platforms, " +
             std::to_string(s.platforms.size()) + " defined");
    }
    for (const auto& p : s.platforms) {
        if (!p.center.valid() || !(p.radius >= 0.0) || !std::isfinite(p.angular_rate) ||
            !std::isfinite(p.phase)) {
            fail("invalid HAPS platform '" + p.id + "'");
        }
    }
    if (s.timeline.empty()) {
        fail("timeline is empty");
    }
    for (std::size_t i = 0; i < s.timeline.size(); ++i) {
        const auto& seg = s.timeline[i];
        if (!(seg.end > seg.start)) {
            fail("timeline segment with end <= start");
        }
        if (i > 0 && seg.start != s.timeline[i - 1].end) {
            fail("timeline segments must be contiguous and non-overlapping");
        }
    }
    for (const auto& [env, table] : s.los_tables) {
        try {
            table.validate();
        } catch (const InvalidArgument& e) {
            fail(std::string(to_string(env)) + ": " + e.what());
        }
    }
    const auto& sv = s.solver;
    if (!(sv.elevation_mask_deg >= 0.0 && sv.elevation_mask_deg < 90.0)) {
        fail("elevation mask must lie in [0, 90) degrees");
    }
    if (!(sv.threshold_m > 0.0) || sv.max_iterations < 1) {
        fail("solver threshold must be positive and max_iterations >= 1");
    }
    if (!(s.satellite_error.sigma >= 0.0) || !(s.satellite_error.tau > 0.0)) {
        fail("satellite error needs sigma >= 0 and tau > 0");
    }
    if (!(s.haps_error.suburban_sigma >= 0.0) || !(s.haps_error.dense_urban_sigma >= 0.0)) {
        fail("HAPS error sigma must be non-negative");
    }
    if (s.mode == Mode::simulation) {
        if (!(s.interval_s > 0.0) || !(s.duration_s > 0.0)) {
            fail("simulation needs positive duration and interval");
        }
        if (s.waypoints.empty()) {
            fail("simulation needs at least one waypoint");
        }
        for (std::size_t i = 0; i < s.waypoints.size(); ++i) {
            if (!s.waypoints[i].position.valid()) {
                fail("invalid waypoint");
            }
            if (i > 0 && !(s.waypoints[i].t > s.waypoints[i - 1].t)) {
                fail("waypoint times must be strictly increasing");
            }
        }
        if (s.constellation.empty()) {
            fail("simulation needs a constellation");
        }
        if (!s.iono && (s.simulate_iono || s.solver.iono_correction)) {
            fail("simulation with ionosphere needs [iono] coefficients");
        }
        const double last = static_cast<double>(s.epoch_count() - 1) * s.interval_s;
        if (!s.timeline_covers(0.0, last)) {
            fail("timeline does not cover the simulated span");
        }
    } else {
        if (s.experiment.obs_file.empty() || s.experiment.nav_file.empty()) {
            fail("experiment mode needs obs_file and nav_file");
        }
        if (s.experiment.truth_file.empty()) {
            fail("experiment mode needs a ground-truth file");
        }
    }
}

namespace scenario_detail {

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw DataError("cannot open " + path.string());
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

template <typename T>
T get(const toml::table& t, std::string_view key, std::string_view ctx) {
    const auto v = t[key].value<T>();
    if (!v) {
        const std::string name = ctx.empty() ? std::string(key) : std::string(ctx) + "." + std::string(key);
        throw ScenarioError(name + " missing or of wrong type");
    }
    return *v;
}

template <typename T>
T get_or(const toml::table& t, std::string_view key, T fallback, std::string_view ctx) {
    if (!t.contains(key)) {
        return fallback;
    }
    return get<T>(t, key, ctx);
}

inline std::vector<double> numbers(const toml::table& t, std::string_view key, std::string_view ctx) {
    const auto* arr = t[key].as_array();
    if (arr == nullptr) {
        throw ScenarioError(std::string(ctx) + "." + std::string(key) + " must be an array");
    }
    std::vector<double> out;
    for (const auto& n : *arr) {
        const auto v = n.value<double>();
        if (!v) {
            throw ScenarioError(std::string(ctx) + "." + std::string(key) + " must hold numbers");
        }
        out.push_back(*v);
    }
    return out;
}

inline const toml::table& table(const toml::table& t, std::string_view key, std::string_view ctx) {
    const auto* sub = t[key].as_table();
    if (sub == nullptr) {
        throw ScenarioError("missing table [" + std::string(ctx.empty() ? "" : std::string(ctx) + ".") +
                            std::string(key) + "]");
    }
    return *sub;
}

inline std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
    const std::filesystem::path path(p);
    return path.is_absolute() ? path : base / path;
}

/// One almanac entry given as a TOML table. Angles in degrees.
inline BroadcastEphemeris almanac_entry(const toml::table& t, const GpsTime& default_epoch) {
    constexpr std::string_view ctx = "satellite";
    BroadcastEphemeris e;
    e.prn = static_cast<int>(get<std::int64_t>(t, "prn", ctx));
    const int week = static_cast<int>(get_or<std::int64_t>(t, "toe_week", default_epoch.week, ctx));
    const double toe = get_or<double>(t, "toe_sow", default_epoch.sow, ctx);
    e.toe = GpsTime{week, toe};
    e.toc = e.toe;
    e.sqrt_a = get<double>(t, "sqrt_a", ctx);
    e.e = get_or<double>(t, "e", 0.0, ctx);
    e.i0 = get<double>(t, "i0_deg", ctx) * kDegToRad;
    e.omega0 = get<double>(t, "omega0_deg", ctx) * kDegToRad;
    e.omega = get_or<double>(t, "omega_deg", 0.0, ctx) * kDegToRad;
    e.m0 = get<double>(t, "m0_deg", ctx) * kDegToRad;
    e.delta_n = get_or<double>(t, "delta_n_rad_s", 0.0, ctx);
    e.i_dot = get_or<double>(t, "i_dot_rad_s", 0.0, ctx);
    e.omega_dot = get_or<double>(t, "omega_dot_rad_s", 0.0, ctx);
    e.af0 = get_or<double>(t, "af0_s", 0.0, ctx);
    e.af1 = get_or<double>(t, "af1", 0.0, ctx);
    if (auto why = e.invariant_violation(); !why.empty()) {
        throw ScenarioError("almanac prn " + std::to_string(e.prn) + ": " + why);
    }
    return e;
}

inline std::vector<BroadcastEphemeris> almanac_list(const toml::array& arr, const GpsTime& epoch) {
    std::vector<BroadcastEphemeris> out;
    for (const auto& node : arr) {
        const auto* t = node.as_table();
        if (t == nullptr) {
            throw ScenarioError("almanac entries must be tables");
        }
        out.push_back(almanac_entry(*t, epoch));
    }
    return out;
}

inline toml::table parse_toml(std::string_view text, const std::string& source) {
    try {
        return toml::parse(text, source);
    } catch (const toml::parse_error& e) {
        std::ostringstream msg;
        msg << source << ":" << e.source().begin.line << ": " << e.description();
        throw ScenarioError(msg.str());
    }
}

} // namespace scenario_detail

/// Builds a scenario from TOML text; relative paths resolve against base_dir.
inline Scenario parse_scenario(std::string_view text, const std::filesystem::path& base_dir,
                               const std::string& source_name = "scenario") {
    using namespace scenario_detail;
    const toml::table root = parse_toml(text, source_name);
    Scenario s;
    s.name = get_or<std::string>(root, "name", "scenario", "");
    const auto mode = get<std::string>(root, "mode", "");
    if (mode == "simulation") {
        s.mode = Mode::simulation;
    } else if (mode == "experiment") {
        s.mode = Mode::experiment;
    } else {
        throw ScenarioError("mode must be 'simulation' or 'experiment'");
    }
    const auto seed = get<std::int64_t>(root, "seed", "");
    if (seed < 0) {
        throw ScenarioError("seed must be non-negative");
    }
    s.seed = static_cast<std::uint64_t>(seed);

    const auto* systems = root["systems"].as_array();
    if (systems == nullptr) {
        throw ScenarioError("systems must be an array of strings");
    }
    for (const auto& node : *systems) {
        const auto name = node.value<std::string>();
        const auto sys = name ? parse_system(*name) : std::nullopt;
        if (!sys) {
            throw ScenarioError("unknown system '" + name.value_or("?") + "'");
        }
        s.systems.push_back(*sys);
    }

    if (const auto* t = root["time"].as_table()) {
        const int week = static_cast<int>(get<std::int64_t>(*t, "start_week", "time"));
        s.start = GpsTime::normalized(week, get<double>(*t, "start_sow", "time"));
        s.duration_s = get_or<double>(*t, "duration_s", 0.0, "time");
        s.interval_s = get_or<double>(*t, "interval_s", 1.0, "time");
    } else if (s.mode == Mode::simulation) {
        throw ScenarioError("missing table [time]");
    }

    if (const auto* t = root["receiver"].as_table()) {
        s.receiver_clock_s = get_or<double>(*t, "clock_offset_s", 0.0, "receiver");
        if (const auto* wps = (*t)["waypoints"].as_array()) {
            for (const auto& node : *wps) {
                const auto* row = node.as_array();
                if (row == nullptr || row->size() != 4) {
                    throw ScenarioError("receiver.waypoints rows are [t_s, lat_deg, lon_deg, h_m]");
                }
                std::array<double, 4> v{};
                for (std::size_t k = 0; k < 4; ++k) {
                    const auto x = (*row)[k].value<double>();
                    if (!x) {
                        throw ScenarioError("receiver.waypoints must hold numbers");
                    }
                    v[k] = *x;
                }
                s.waypoints.push_back({v[0], GeodeticCoord::from_degrees(v[1], v[2], v[3])});
            }
        }
    }

    if (const auto* t = root["constellation"].as_table()) {
        if (t->contains("almanac_file")) {
            const auto path = resolve(base_dir, get<std::string>(*t, "almanac_file", "constellation"));
            const toml::table alm = parse_toml(read_file(path), path.string());
            const auto* arr = alm["satellite"].as_array();
            if (arr == nullptr) {
                throw ScenarioError(path.string() + ": expected [[satellite]] entries");
            }
            s.constellation = almanac_list(*arr, s.start);
        }
        if (const auto* arr = (*t)["satellite"].as_array()) {
            const auto more = almanac_list(*arr, s.start);
            s.constellation.insert(s.constellation.end(), more.begin(), more.end());
        }
        if (t->contains("prns")) {
            const auto keep = numbers(*t, "prns", "constellation");
            std::erase_if(s.constellation, [&](const BroadcastEphemeris& e) {
                return std::find(keep.begin(), keep.end(), static_cast<double>(e.prn)) == keep.end();
            });
        }
    }

    if (const auto* t = root["iono"].as_table()) {
        const auto alpha = numbers(*t, "alpha", "iono");
        const auto beta = numbers(*t, "beta", "iono");
        if (alpha.size() != 4 || beta.size() != 4) {
            throw ScenarioError("iono.alpha and iono.beta need exactly 4 entries");
        }
        IonoParameters p;
        std::copy(alpha.begin(), alpha.end(), p.alpha.begin());
        std::copy(beta.begin(), beta.end(), p.beta.begin());
        s.iono = p;
    }

    if (const auto* t = root["atmosphere"].as_table()) {
        s.simulate_iono = get_or<bool>(*t, "simulate_iono", true, "atmosphere");
        s.simulate_tropo = get_or<bool>(*t, "simulate_tropo", true, "atmosphere");
        s.solver.atmosphere.pressure_hpa = get_or<double>(*t, "pressure_hpa", 1013.25, "atmosphere");
        s.solver.atmosphere.temperature_k = get_or<double>(*t, "temperature_k", 291.15, "atmosphere");
        s.solver.atmosphere.relative_humidity =
            get_or<double>(*t, "relative_humidity", 0.5, "atmosphere");
    }

    if (const auto* errors = root["errors"].as_table()) {
        if (const auto* t = (*errors)["satellite"].as_table()) {
            s.satellite_error.sigma = get_or<double>(*t, "sigma_m", 6.0, "errors.satellite");
            s.satellite_error.tau = get_or<double>(*t, "tau_s", 10.0, "errors.satellite");
        }
        if (const auto* t = (*errors)["haps"].as_table()) {
            s.haps_error.suburban_sigma = get_or<double>(*t, "suburban_sigma_m", 2.0, "errors.haps");
            s.haps_error.dense_urban_sigma =
                get_or<double>(*t, "dense_urban_sigma_m", 5.0, "errors.haps");
            s.haps_error.los_gating = get_or<bool>(*t, "los_gating", false, "errors.haps");
        }
    }

    if (const auto* arr = root["timeline"].as_array()) {
        for (const auto& node : *arr) {
            const auto* t = node.as_table();
            if (t == nullptr) {
                throw ScenarioError("timeline entries must be tables");
            }
            const auto env = parse_environment(get<std::string>(*t, "environment", "timeline"));
            if (!env) {
                throw ScenarioError("timeline.environment must be suburban or dense_urban");
            }
            s.timeline.push_back(
                {get<double>(*t, "start_s", "timeline"), get<double>(*t, "end_s", "timeline"), *env});
        }
    }

    if (const auto* los = root["los"].as_table()) {
        for (const auto& [key, node] : *los) {
            const auto env = parse_environment(key.str());
            const auto* t = node.as_table();
            if (!env || t == nullptr) {
                throw ScenarioError("los tables are [los.suburban] / [los.dense_urban]");
            }
            const auto el = numbers(*t, "elevation_deg", "los");
            const auto p = numbers(*t, "probability", "los");
            if (el.size() != p.size()) {
                throw ScenarioError("los elevation_deg and probability differ in length");
            }
            LosProbabilityTable table{*env, {}};
            for (std::size_t i = 0; i < el.size(); ++i) {
                table.breakpoints.emplace_back(el[i], p[i]);
            }
            s.los_tables[*env] = table;
        }
    }

    if (const auto* arr = root["haps"].as_array()) {
        for (const auto& node : *arr) {
            const auto* t = node.as_table();
            if (t == nullptr) {
                throw ScenarioError("haps entries must be tables");
            }
            HapsPlatform p;
            p.id = get<std::string>(*t, "id", "haps");
            p.center = GeodeticCoord::from_degrees(get<double>(*t, "lat_deg", "haps"),
                                                   get<double>(*t, "lon_deg", "haps"),
                                                   get_or<double>(*t, "height_m", kDefaultHapsHeight, "haps"));
            p.radius = get_or<double>(*t, "radius_m", 0.0, "haps");
            p.angular_rate = get_or<double>(*t, "angular_rate_rad_s", 0.0, "haps");
            p.phase = get_or<double>(*t, "phase_rad", 0.0, "haps");
            s.platforms.push_back(p);
        }
    }

    if (const auto* t = root["solver"].as_table()) {
        s.solver.elevation_mask_deg = get_or<double>(*t, "elevation_mask_deg", 15.0, "solver");
        s.solver.threshold_m = get_or<double>(*t, "threshold_m", 0.01, "solver");
        s.solver.max_iterations = static_cast<int>(get_or<std::int64_t>(*t, "max_iterations", 20, "solver"));
        s.solver.iono_correction = get_or<bool>(*t, "iono_correction", true, "solver");
        s.solver.tropo_correction = get_or<bool>(*t, "tropo_correction", true, "solver");
        s.relativistic_clock = get_or<bool>(*t, "relativistic_clock", true, "solver");
    }

    if (const auto* t = root["experiment"].as_table()) {
        s.experiment.obs_file = resolve(base_dir, get<std::string>(*t, "obs_file", "experiment"));
        s.experiment.nav_file = resolve(base_dir, get<std::string>(*t, "nav_file", "experiment"));
        if (t->contains("truth_file")) {
            s.experiment.truth_file = resolve(base_dir, get<std::string>(*t, "truth_file", "experiment"));
        }
    }

    validate(s);
    return s;
}

inline Scenario load_scenario(const std::filesystem::path& file) {
    return parse_scenario(scenario_detail::read_file(file), file.parent_path(), file.string());
}

} // namespace hapsgnss
