#pragma once

#include <cstdint>
#include <string>

namespace pumpstudy {

// All timestamps in the pipeline are UTC. Epoch minutes are epoch seconds / 60.

/// Days since 1970-01-01 for a civil date (proleptic Gregorian).
std::int64_t days_from_civil(int y, unsigned m, unsigned d);

struct CivilDate {
    int year;
    unsigned month;
    unsigned day;
};

/// Inverse of days_from_civil.
CivilDate civil_from_days(std::int64_t z);

/// Parse "YYYY-MM-DD[T ]HH:MM:SS[.fff][Z|+00:00]" to epoch seconds.
/// Fractional seconds are floored away. Throws ParseError on malformed input
/// or a non-UTC offset.
std::int64_t parse_iso8601_utc(const std::string& s);

/// "YYYY-MM-DDTHH:MM:SSZ" for an epoch-second timestamp.
std::string format_iso8601_utc(std::int64_t epoch_seconds);

/// "YYYY-MM-DD" for an epoch-day index.
std::string format_date(std::int64_t epoch_days);

/// Epoch day of the Monday starting the ISO week that contains the given day.
std::int64_t week_start_day(std::int64_t epoch_days);

}  // namespace pumpstudy
