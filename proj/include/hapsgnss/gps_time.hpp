// hapsgnss GPS time
#pragma once

#include <hapsgnss/constants.hpp>

#include <chrono>
#include <cmath>
#include <compare>

namespace hapsgnss {

/// GPS time as a full week number plus seconds of week.
struct GpsTime {
    int week = 0;
    double sow = 0.0; ///< seconds of week [0, 604800)

    /// Normalizes so that sow lies in [0, 604800).
    static GpsTime normalized(int week, double sow) {
        const double wraps = std::floor(sow / kSecondsPerWeek);
        return GpsTime{week + static_cast<int>(wraps), sow - wraps * kSecondsPerWeek};
    }

    /// Builds a GPS time from a calendar date in the GPS time scale.
    static GpsTime from_calendar(int year, int month, int day, int hour, int minute,
                                 double second) {
        using namespace std::chrono;
        const auto days = (sys_days{std::chrono::year{year} / month / day} -
                           sys_days{std::chrono::year{1980} / January / 6})
                              .count();
        const double sow_total = static_cast<double>(days) * 86400.0 + hour * 3600.0 +
                                 minute * 60.0 + second;
        return normalized(0, sow_total);
    }

    GpsTime operator+(double seconds) const { return normalized(week, sow + seconds); }
    GpsTime operator-(double seconds) const { return normalized(week, sow - seconds); }

    /// Signed difference in seconds; week numbers carry rollover.
    double operator-(const GpsTime& other) const {
        return static_cast<double>(week - other.week) * kSecondsPerWeek + (sow - other.sow);
    }

    bool operator==(const GpsTime&) const = default;
    auto operator<=>(const GpsTime&) const = default;
};

} // namespace hapsgnss
