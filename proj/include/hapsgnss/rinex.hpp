// hapsgnss RINEX reader
// GPS navigation and observation files, RINEX 2.11 and 3.0x layouts.
//
// Only what the positioning pipeline needs is extracted: broadcast
// ephemerides, the Klobuchar coefficients from the navigation header and
// the GPS L1 C/A pseudorange (C1 / C1C). Everything else is skipped.
#pragma once

#include <hapsgnss/errors.hpp>
#include <hapsgnss/gps_time.hpp>

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace hapsgnss {

/// Klobuchar broadcast coefficients (GPS-ICD units).
struct IonoParameters {
    std::array<double, 4> alpha{}; ///< [s, s/semicircle, s/semicircle², s/semicircle³]
    std::array<double, 4> beta{};  ///< [s, s/semicircle, s/semicircle², s/semicircle³]

    bool valid() const {
        return std::all_of(alpha.begin(), alpha.end(), [](double v) { return std::isfinite(v); }) &&
               std::all_of(beta.begin(), beta.end(), [](double v) { return std::isfinite(v); });
    }
    bool operator==(const IonoParameters&) const = default;
};

/// One satellite's broadcast Keplerian record and clock polynomial.
struct BroadcastEphemeris {
    int prn = 0;
    GpsTime toc;   ///< clock reference time
    GpsTime toe;   ///< ephemeris reference time
    double af0 = 0.0, af1 = 0.0, af2 = 0.0; ///< [s], [s/s], [s/s²]

    double sqrt_a = 0.0;    ///< [m^½]
    double e = 0.0;
    double i0 = 0.0;        ///< [rad]
    double omega0 = 0.0;    ///< longitude of ascending node at weekly epoch [rad]
    double omega = 0.0;     ///< argument of perigee [rad]
    double m0 = 0.0;        ///< [rad]
    double delta_n = 0.0;   ///< [rad/s]
    double i_dot = 0.0;     ///< [rad/s]
    double omega_dot = 0.0; ///< [rad/s]

    double cuc = 0.0, cus = 0.0; ///< [rad]
    double crc = 0.0, crs = 0.0; ///< [m]
    double cic = 0.0, cis = 0.0; ///< [rad]

    /// Reason the record violates its invariants, or empty when it is valid.
    std::string invariant_violation() const {
        const std::array<double, 19> all{af0, af1, af2, sqrt_a, e, i0, omega0, omega, m0,
                                         delta_n, i_dot, omega_dot, cuc, cus, crc, crs, cic, cis,
                                         toe.sow};
        if (!std::all_of(all.begin(), all.end(), [](double v) { return std::isfinite(v); })) {
            return "non-finite field";
        }
        if (prn < 1 || prn > 32) {
            return "prn out of range";
        }
        if (!(e >= 0.0 && e < 0.1)) {
            return "eccentricity out of range";
        }
        const double a = sqrt_a * sqrt_a;
        if (!(a >= 2.0e7 && a <= 3.0e7)) {
            return "semi-major axis out of range";
        }
        return {};
    }

    bool operator==(const BroadcastEphemeris&) const = default;
};

struct NavigationData {
    double version = 0.0;
    std::vector<BroadcastEphemeris> ephemerides;
    std::optional<IonoParameters> iono; ///< absent when the header carries no coefficients
    std::size_t skipped = 0;            ///< GPS records rejected by validation
    std::vector<std::string> warnings;
};

struct ObservationEntry {
    int prn = 0;
    double pseudorange = 0.0; ///< L1 C/A code pseudorange [m]
    bool operator==(const ObservationEntry&) const = default;
};

struct EpochObservation {
    GpsTime epoch;
    std::vector<ObservationEntry> entries;
    bool operator==(const EpochObservation&) const = default;
};

struct ObservationData {
    double version = 0.0;
    std::vector<EpochObservation> epochs;
    std::size_t dropped_epochs = 0; ///< truncated or empty epoch blocks
    std::vector<std::string> warnings;
};

namespace rinex_detail {

inline std::vector<std::string_view> split_lines(std::string_view text) {
    std::vector<std::string_view> lines;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) {
            end = text.size();
        }
        std::string_view line = text.substr(pos, end - pos);
        if (!line.empty() && line.back() == '\r') {
            line.remove_suffix(1);
        }
        lines.push_back(line);
        pos = end + 1;
    }
    return lines;
}

/// Fixed-column slice, clipped to the line.
inline std::string_view field(std::string_view line, std::size_t start, std::size_t width) {
    if (start >= line.size()) {
        return {};
    }
    return line.substr(start, std::min(width, line.size() - start));
}

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
        s.remove_prefix(1);
    }
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) {
        s.remove_suffix(1);
    }
    return s;
}

inline std::string_view label(std::string_view line) { return trim(field(line, 60, 20)); }

inline bool blank(std::string_view s) { return trim(s).empty(); }

/// Parses a Fortran-style real ("1.2D-03" accepted). nullopt on blank,
/// throws nothing; malformed text yields NaN.
inline std::optional<double> real(std::string_view s) {
    s = trim(s);
    if (s.empty()) {
        return std::nullopt;
    }
    std::string buf(s);
    for (char& c : buf) {
        if (c == 'D' || c == 'd') {
            c = 'E';
        }
    }
    std::string_view v(buf);
    if (!v.empty() && v.front() == '+') {
        v.remove_prefix(1);
    }
    double out = 0.0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || ptr != v.data() + v.size()) {
        return std::numeric_limits<double>::quiet_NaN();
    }
    return out;
}

inline std::optional<int> integer(std::string_view s) {
    s = trim(s);
    if (s.empty()) {
        return std::nullopt;
    }
    if (s.front() == '+') {
        s.remove_prefix(1);
    }
    int out = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    if (ec != std::errc{} || ptr != s.data() + s.size()) {
        return std::nullopt;
    }
    return out;
}

/// Real field that must be present and well formed.
inline double required_real(std::string_view s, std::size_t line_no, const char* what) {
    const auto v = real(s);
    if (!v || !std::isfinite(*v)) {
        throw ParseError(std::string("bad numeric field: ") + what, line_no);
    }
    return *v;
}

struct Header {
    double version = 0.0;
    char file_type = ' ';
    char system = ' ';
};

inline Header read_version_line(const std::vector<std::string_view>& lines) {
    if (lines.empty() || label(lines[0]) != "RINEX VERSION / TYPE") {
        throw ParseError("missing RINEX VERSION / TYPE header line", 1);
    }
    Header h;
    const auto version = real(field(lines[0], 0, 9));
    if (!version || !std::isfinite(*version) || *version < 2.0 || *version >= 4.0) {
        throw ParseError("unsupported RINEX version", 1);
    }
    h.version = *version;
    const auto type = trim(field(lines[0], 20, 1));
    h.file_type = type.empty() ? ' ' : type.front();
    const auto sys = trim(field(lines[0], 40, 1));
    h.system = sys.empty() ? ' ' : sys.front();
    return h;
}

inline std::size_t find_end_of_header(const std::vector<std::string_view>& lines) {
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (label(lines[i]) == "END OF HEADER") {
            return i + 1;
        }
    }
    throw ParseError("missing END OF HEADER", lines.size());
}

inline int two_digit_year(int yy) { return yy < 80 ? 2000 + yy : 1900 + yy; }

inline std::optional<GpsTime> calendar_time(int year, int month, int day, int hour, int minute,
                                            double second) {
    if (month < 1 || month > 12 || day < 1 || day > 31 || hour < 0 || hour > 24 || minute < 0 ||
        minute > 59 || !(second >= 0.0 && second < 61.0) || year < 1980 || year > 2200) {
        return std::nullopt;
    }
    return GpsTime::from_calendar(year, month, day, hour, minute, second);
}

} // namespace rinex_detail

/// Parses a GPS navigation file. GPS records that fail validation are
/// skipped and counted; records of other constellations are ignored.
inline NavigationData parse_navigation(std::string_view text) {
    using namespace rinex_detail;
    const auto lines = split_lines(text);
    const Header h = read_version_line(lines);
    const bool v3 = h.version >= 3.0;
    if (h.file_type != 'N' || (v3 && h.system != 'G' && h.system != 'M')) {
        throw ParseError("not a GPS navigation file", 1);
    }
    const std::size_t body = find_end_of_header(lines);

    NavigationData nav;
    nav.version = h.version;
    IonoParameters iono;
    bool have_alpha = false, have_beta = false;
    for (std::size_t i = 1; i + 1 < body; ++i) {
        const auto lab = label(lines[i]);
        const std::size_t line_no = i + 1;
        if (lab == "ION ALPHA" || lab == "ION BETA") {
            auto& dst = lab == "ION ALPHA" ? iono.alpha : iono.beta;
            for (std::size_t k = 0; k < 4; ++k) {
                dst[k] = required_real(field(lines[i], 2 + 12 * k, 12), line_no, "ion coefficient");
            }
            (lab == "ION ALPHA" ? have_alpha : have_beta) = true;
        } else if (lab == "IONOSPHERIC CORR") {
            const auto kind = trim(field(lines[i], 0, 4));
            if (kind == "GPSA" || kind == "GPSB") {
                auto& dst = kind == "GPSA" ? iono.alpha : iono.beta;
                for (std::size_t k = 0; k < 4; ++k) {
                    dst[k] =
                        required_real(field(lines[i], 5 + 12 * k, 12), line_no, "ion coefficient");
                }
                (kind == "GPSA" ? have_alpha : have_beta) = true;
            }
        }
    }
    if (have_alpha && have_beta) {
        nav.iono = iono;
    }

    const std::size_t col0 = v3 ? 4 : 3; // first column of orbit-line fields
    auto is_record_start = [&](std::string_view line) {
        if (blank(line)) {
            return false;
        }
        return v3 ? line.front() != ' ' : !blank(field(line, 0, 2));
    };

    std::size_t i = body;
    while (i < lines.size()) {
        if (!is_record_start(lines[i])) {
            ++i;
            continue;
        }
        const std::size_t start = i;
        std::size_t end = i + 1;
        while (end < lines.size() && !is_record_start(lines[end]) && !blank(lines[end])) {
            ++end;
        }
        i = end;
        const std::string_view first = lines[start];
        if (v3 && first.front() != 'G') {
            continue;
        }
        const std::string where = "record at line " + std::to_string(start + 1);
        auto skip = [&](const std::string& why) {
            ++nav.skipped;
            nav.warnings.push_back(where + " skipped: " + why);
        };
        if (end - start < 6) {
            skip("truncated record");
            continue;
        }

        BroadcastEphemeris eph;
        std::optional<int> prn, year, month, day, hour, minute;
        std::optional<double> sec;
        std::size_t clock_col = 0;
        if (v3) {
            prn = integer(field(first, 1, 2));
            year = integer(field(first, 4, 4));
            month = integer(field(first, 9, 2));
            day = integer(field(first, 12, 2));
            hour = integer(field(first, 15, 2));
            minute = integer(field(first, 18, 2));
            sec = real(field(first, 21, 2));
            clock_col = 23;
        } else {
            prn = integer(field(first, 0, 2));
            const auto yy = integer(field(first, 2, 3));
            if (yy) {
                year = two_digit_year(*yy);
            }
            month = integer(field(first, 5, 3));
            day = integer(field(first, 8, 3));
            hour = integer(field(first, 11, 3));
            minute = integer(field(first, 14, 3));
            sec = real(field(first, 17, 5));
            clock_col = 22;
        }
        if (!prn || !year || !month || !day || !hour || !minute || !sec) {
            skip("malformed epoch");
            continue;
        }
        const auto toc = calendar_time(*year, *month, *day, *hour, *minute, *sec);
        if (!toc) {
            skip("invalid epoch");
            continue;
        }
        eph.prn = *prn;
        eph.toc = *toc;

        // orbit[row][k]: broadcast orbit line row (1-based), field k.
        auto orbit = [&](std::size_t row, std::size_t k) -> std::optional<double> {
            if (start + row >= end) {
                return std::nullopt;
            }
            return real(field(lines[start + row], col0 + 19 * k, 19));
        };
        auto clock = [&](std::size_t k) { return real(field(first, clock_col + 19 * k, 19)); };

        const std::array<std::optional<double>, 3> clk{clock(0), clock(1), clock(2)};
        const std::array<std::optional<double>, 17> orb{
            orbit(1, 1), orbit(1, 2), orbit(1, 3),              // crs, delta_n, m0
            orbit(2, 0), orbit(2, 1), orbit(2, 2), orbit(2, 3), // cuc, e, cus, sqrt_a
            orbit(3, 0), orbit(3, 1), orbit(3, 2), orbit(3, 3), // toe, cic, omega0, cis
            orbit(4, 0), orbit(4, 1), orbit(4, 2), orbit(4, 3), // i0, crc, omega, omega_dot
            orbit(5, 0), orbit(5, 2)};                          // i_dot, week
        if (std::any_of(clk.begin(), clk.end(), [](const auto& v) { return !v; }) ||
            std::any_of(orb.begin(), orb.end(), [](const auto& v) { return !v; })) {
            skip("missing field");
            continue;
        }
        eph.af0 = *clk[0];
        eph.af1 = *clk[1];
        eph.af2 = *clk[2];
        eph.crs = *orb[0];
        eph.delta_n = *orb[1];
        eph.m0 = *orb[2];
        eph.cuc = *orb[3];
        eph.e = *orb[4];
        eph.cus = *orb[5];
        eph.sqrt_a = *orb[6];
        const double toe_sow = *orb[7];
        eph.cic = *orb[8];
        eph.omega0 = *orb[9];
        eph.cis = *orb[10];
        eph.i0 = *orb[11];
        eph.crc = *orb[12];
        eph.omega = *orb[13];
        eph.omega_dot = *orb[14];
        eph.i_dot = *orb[15];
        const double week = *orb[16];
        if (!std::isfinite(week) || !std::isfinite(toe_sow) || week < 0.0 || week > 1.0e5 ||
            toe_sow < 0.0 || toe_sow >= kSecondsPerWeek) {
            skip("invalid toe");
            continue;
        }
        eph.toe = GpsTime{static_cast<int>(week), toe_sow};

        if (auto why = eph.invariant_violation(); !why.empty()) {
            skip(why);
            continue;
        }
        nav.ephemerides.push_back(eph);
    }

    if (nav.ephemerides.empty()) {
        throw DataError("no ephemerides");
    }
    return nav;
}

/// Parses an observation file, keeping only GPS L1 C/A pseudoranges.
/// Blank or out-of-range pseudoranges are omitted; truncated epoch blocks
/// are dropped and counted.
inline ObservationData parse_observation(std::string_view text) {
    using namespace rinex_detail;
    const auto lines = split_lines(text);
    const Header h = read_version_line(lines);
    const bool v3 = h.version >= 3.0;
    if (h.file_type != 'O') {
        throw ParseError("not an observation file", 1);
    }
    const std::size_t body = find_end_of_header(lines);

    // Observable types: v2 holds one list for all systems, v3 one per system.
    std::vector<std::string> types;
    std::size_t expected_types = 0;
    bool in_gps_list = false;
    for (std::size_t i = 1; i + 1 < body; ++i) {
        const auto lab = label(lines[i]);
        const std::string_view line = lines[i];
        if (!v3 && lab == "# / TYPES OF OBSERV") {
            if (const auto n = integer(field(line, 0, 6))) {
                expected_types = static_cast<std::size_t>(std::max(*n, 0));
            }
            for (std::size_t k = 0; k < 9; ++k) {
                const auto t = trim(field(line, 6 + 6 * k, 6));
                if (!t.empty()) {
                    types.emplace_back(t);
                }
            }
        } else if (v3 && lab == "SYS / # / OBS TYPES") {
            const char sys = line.empty() ? ' ' : line.front();
            if (sys != ' ') {
                in_gps_list = sys == 'G';
                if (in_gps_list) {
                    const auto n = integer(field(line, 3, 3));
                    if (!n || *n < 0) {
                        throw ParseError("bad observable count", i + 1);
                    }
                    expected_types = static_cast<std::size_t>(*n);
                }
            }
            if (in_gps_list) {
                for (std::size_t k = 0; k < 13; ++k) {
                    const auto t = trim(field(line, 7 + 4 * k, 4));
                    if (!t.empty()) {
                        types.emplace_back(t);
                    }
                }
            }
        }
    }
    if (types.size() != expected_types) {
        throw ParseError("observable type count does not match its list", 0);
    }
    const auto code_it = std::find(types.begin(), types.end(), v3 ? "C1C" : "C1");
    if (code_it == types.end()) {
        throw ParseError(v3 ? "missing C1C observable for GPS" : "missing C1 observable", 0);
    }
    const std::size_t code_index = static_cast<std::size_t>(code_it - types.begin());
    const std::size_t ntypes = types.size();

    ObservationData out;
    out.version = h.version;
    auto warn_drop = [&](std::size_t line_no, const std::string& why) {
        ++out.dropped_epochs;
        out.warnings.push_back("epoch at line " + std::to_string(line_no) + " dropped: " + why);
    };

    auto finish_epoch = [&](EpochObservation&& epoch, std::size_t line_no) {
        if (epoch.entries.empty()) {
            warn_drop(line_no, "no GPS pseudoranges");
            return;
        }
        out.epochs.push_back(std::move(epoch));
    };

    auto accept = [&](EpochObservation& epoch, std::set<int>& seen, int prn,
                      std::optional<double> value, std::size_t line_no) {
        if (!value) {
            return;
        }
        if (!std::isfinite(*value) || *value < 1.5e7 || *value > 5.0e7) {
            out.warnings.push_back("line " + std::to_string(line_no) +
                                   ": pseudorange out of range omitted");
            return;
        }
        if (prn < 1 || prn > 32) {
            return;
        }
        if (!seen.insert(prn).second) {
            out.warnings.push_back("line " + std::to_string(line_no) + ": duplicate prn omitted");
            return;
        }
        epoch.entries.push_back({prn, *value});
    };

    std::size_t i = body;
    if (v3) {
        while (i < lines.size()) {
            const std::string_view line = lines[i];
            if (line.empty() || line.front() != '>') {
                ++i;
                continue;
            }
            const std::size_t header_line = i + 1;
            const auto year = integer(field(line, 2, 4));
            const auto month = integer(field(line, 7, 2));
            const auto day = integer(field(line, 10, 2));
            const auto hour = integer(field(line, 13, 2));
            const auto minute = integer(field(line, 16, 2));
            const auto sec = real(field(line, 18, 11));
            const auto flag = integer(field(line, 31, 1));
            const auto nsat = integer(field(line, 32, 3));
            ++i;
            if (!nsat || *nsat < 0) {
                warn_drop(header_line, "malformed epoch header");
                continue;
            }
            const std::size_t n = static_cast<std::size_t>(*nsat);
            // Consume the block, stopping early at the next epoch marker.
            std::size_t taken = 0;
            const std::size_t block = i;
            while (taken < n && i < lines.size() && !(!lines[i].empty() && lines[i].front() == '>')) {
                ++taken;
                ++i;
            }
            const int flag_value = flag.value_or(0);
            if (flag_value >= 2) {
                continue; // event records and cycle slip blocks carry no usable epoch
            }
            if (taken < n) {
                warn_drop(header_line, "truncated epoch block");
                continue;
            }
            std::optional<GpsTime> t;
            if (year && month && day && hour && minute && sec) {
                t = calendar_time(*year, *month, *day, *hour, *minute, *sec);
            }
            if (!t) {
                warn_drop(header_line, "malformed epoch time");
                continue;
            }
            EpochObservation epoch{*t, {}};
            std::set<int> seen;
            for (std::size_t k = 0; k < n; ++k) {
                const std::string_view sat = lines[block + k];
                if (sat.empty() || sat.front() != 'G') {
                    continue;
                }
                const auto prn = integer(field(sat, 1, 2));
                if (!prn) {
                    continue;
                }
                accept(epoch, seen, *prn, real(field(sat, 3 + 16 * code_index, 14)), block + k + 1);
            }
            finish_epoch(std::move(epoch), header_line);
        }
        return out;
    }

    const std::size_t lines_per_sat = ntypes == 0 ? 1 : (ntypes + 4) / 5;
    while (i < lines.size()) {
        const std::string_view line = lines[i];
        if (blank(line)) {
            ++i;
            continue;
        }
        const std::size_t header_line = i + 1;
        const auto yy = integer(field(line, 1, 2));
        const auto month = integer(field(line, 4, 2));
        const auto day = integer(field(line, 7, 2));
        const auto hour = integer(field(line, 10, 2));
        const auto minute = integer(field(line, 13, 2));
        const auto sec = real(field(line, 15, 11));
        const auto flag = integer(field(line, 28, 1));
        const auto nsat = integer(field(line, 29, 3));
        ++i;
        if (!nsat || *nsat < 0) {
            warn_drop(header_line, "malformed epoch header");
            continue;
        }
        const std::size_t n = static_cast<std::size_t>(*nsat);
        const int flag_value = flag.value_or(0);
        if (flag_value >= 2 && flag_value <= 5) {
            i += n; // special records: n header lines follow
            continue;
        }
        // Satellite list: 12 per line, continuation lines start at column 32.
        std::vector<std::string_view> sats;
        std::size_t list_line = header_line - 1;
        bool truncated = false;
        while (sats.size() < n) {
            if (list_line >= lines.size()) {
                truncated = true;
                break;
            }
            for (std::size_t k = 0; k < 12 && sats.size() < n; ++k) {
                sats.push_back(field(lines[list_line], 32 + 3 * k, 3));
            }
            if (sats.size() < n) {
                ++list_line;
            }
        }
        i = list_line + 1;
        const std::size_t data_start = i;
        const std::size_t needed = n * lines_per_sat;
        if (truncated || data_start + needed > lines.size()) {
            i = lines.size();
            warn_drop(header_line, "truncated epoch block");
            continue;
        }
        i = data_start + needed;
        if (flag_value == 6) {
            continue;
        }
        std::optional<GpsTime> t;
        if (yy && month && day && hour && minute && sec) {
            t = calendar_time(two_digit_year(*yy), *month, *day, *hour, *minute, *sec);
        }
        if (!t) {
            warn_drop(header_line, "malformed epoch time");
            continue;
        }
        EpochObservation epoch{*t, {}};
        std::set<int> seen;
        for (std::size_t k = 0; k < n; ++k) {
            const std::string_view id = sats[k];
            const char sys = id.empty() ? ' ' : id.front();
            if (sys != 'G' && sys != ' ') {
                continue;
            }
            const auto prn = integer(field(id, 1, 2));
            if (!prn) {
                continue;
            }
            const std::size_t row = data_start + k * lines_per_sat + code_index / 5;
            accept(epoch, seen, *prn, real(field(lines[row], 16 * (code_index % 5), 14)), row + 1);
        }
        finish_epoch(std::move(epoch), header_line);
    }
    return out;
}

} // namespace hapsgnss
