// Shared helpers for the test suites.
#pragma once

#include <hapsgnss/hapsgnss.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace testsupport {

inline std::filesystem::path source_dir() { return HAPSGNSS_SOURCE_DIR; }
inline std::filesystem::path data_dir() { return source_dir() / "tests" / "data"; }
inline std::filesystem::path scenario_dir() { return source_dir() / "scenarios"; }

inline std::string read_text(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_file(const std::filesystem::path& p, const std::string& text) {
    std::filesystem::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary);
    out << text;
}

/// Fresh, empty directory under the system temp dir.
inline std::filesystem::path temp_dir(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / ("hapsgnss_test_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

inline hapsgnss::Scenario load(const std::string& name) {
    return hapsgnss::load_scenario(scenario_dir() / name);
}

/// Scenario text from a shipped file with `from` replaced by `to`.
inline std::string patched(const std::string& name, const std::string& from, const std::string& to) {
    std::string text = read_text(scenario_dir() / name);
    const auto pos = text.find(from);
    if (pos == std::string::npos) {
        throw std::runtime_error("patch anchor not found: " + from);
    }
    text.replace(pos, from.size(), to);
    return text;
}

inline hapsgnss::Scenario parse(const std::string& text) {
    return hapsgnss::parse_scenario(text, scenario_dir(), "test");
}

inline std::string d19(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%19.12E", v);
    std::string s(buf);
    for (auto& c : s) {
        if (c == 'E') {
            c = 'D';
        }
    }
    return s;
}

inline std::string header_line(const std::string& text, const std::string& label) {
    std::string s = text;
    s.resize(60, ' ');
    return s + label + "\n";
}

/// A point `range` meters from `receiver` along the given look direction.
inline hapsgnss::EcefVector source_at(const hapsgnss::GeodeticCoord& receiver, double el_deg, double az_deg,
                                      double range) {
    using namespace hapsgnss;
    const double el = el_deg * kDegToRad, az = az_deg * kDegToRad;
    const EcefVector enu(std::cos(el) * std::sin(az), std::cos(el) * std::cos(az), std::sin(el));
    return geodetic_to_ecef(receiver) + ecef_to_local_rotation(receiver).transpose() * enu * range;
}

/// Pseudorange p with p = |R(p/c)·P - x| + clock_m, the model the solver
/// linearizes, solved by fixed-point iteration.
inline double consistent_pseudorange(const hapsgnss::EcefVector& source, const hapsgnss::EcefVector& receiver,
                                     double clock_m) {
    using namespace hapsgnss;
    double p = (source - receiver).norm() + clock_m;
    for (int i = 0; i < 10; ++i) {
        p = (sagnac_rotate(source, p / kSpeedOfLight) - receiver).norm() + clock_m;
    }
    return p;
}

/// RINEX 3 GPS navigation text for the given records.
inline std::string write_nav_v3(const std::vector<hapsgnss::BroadcastEphemeris>& ephs,
                                const hapsgnss::IonoParameters& iono) {
    std::string out = header_line("     3.04           N: GNSS NAV DATA    G: GPS", "RINEX VERSION / TYPE");
    char buf[128];
    std::string a = "GPSA ", b = "GPSB ";
    for (int k = 0; k < 4; ++k) {
        std::snprintf(buf, sizeof buf, "%12.4E", iono.alpha[k]);
        a += buf;
        std::snprintf(buf, sizeof buf, "%12.4E", iono.beta[k]);
        b += buf;
    }
    out += header_line(a, "IONOSPHERIC CORR");
    out += header_line(b, "IONOSPHERIC CORR");
    out += header_line("", "END OF HEADER");
    for (const auto& e : ephs) {
        // toc is expressed as a calendar time: week 2218 day 0 is 2022-07-10.
        const double into = e.toc - hapsgnss::GpsTime{2218, 0.0};
        const int day = static_cast<int>(into / 86400.0);
        const int sod = static_cast<int>(into - day * 86400.0);
        std::snprintf(buf, sizeof buf, "G%02d 2022 07 %02d %02d %02d %02d", e.prn, 10 + day, sod / 3600,
                      (sod / 60) % 60, sod % 60);
        out += buf + d19(e.af0) + d19(e.af1) + d19(e.af2) + "\n";
        auto row = [&](double x0, double x1, double x2, double x3) {
            out += "    " + d19(x0) + d19(x1) + d19(x2) + d19(x3) + "\n";
        };
        row(0.0, e.crs, e.delta_n, e.m0);
        row(e.cuc, e.e, e.cus, e.sqrt_a);
        row(e.toe.sow, e.cic, e.omega0, e.cis);
        row(e.i0, e.crc, e.omega, e.omega_dot);
        row(e.i_dot, 1.0, static_cast<double>(e.toe.week), 0.0);
        row(2.0, 0.0, 0.0, 0.0);
        row(e.toe.sow, 4.0, 0.0, 0.0);
    }
    return out;
}

/// RINEX 3 observation text with one C1C observable.
inline std::string write_obs_v3(const std::vector<hapsgnss::EpochObservation>& epochs) {
    std::string out = header_line("     3.04           OBSERVATION DATA    G", "RINEX VERSION / TYPE");
    out += header_line("G    1 C1C", "SYS / # / OBS TYPES");
    out += header_line("", "END OF HEADER");
    char buf[128];
    for (const auto& ep : epochs) {
        const double into = ep.epoch - hapsgnss::GpsTime{2218, 0.0};
        const int day = static_cast<int>(into / 86400.0);
        const double sod = into - day * 86400.0;
        const int hour = static_cast<int>(sod / 3600.0);
        const int minute = static_cast<int>((sod - hour * 3600.0) / 60.0);
        const double sec = sod - hour * 3600.0 - minute * 60.0;
        std::snprintf(buf, sizeof buf, "> 2022 07 %02d %02d %02d%11.7f  0%3zu\n", 10 + day, hour, minute,
                      sec, ep.entries.size());
        out += buf;
        for (const auto& e : ep.entries) {
            std::snprintf(buf, sizeof buf, "G%02d%14.3f\n", e.prn, e.pseudorange);
            out += buf;
        }
    }
    return out;
}

} // namespace testsupport
