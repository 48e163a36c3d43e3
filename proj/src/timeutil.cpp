#include "pumpstudy/timeutil.hpp"

#include <cstdio>

#include "pumpstudy/errors.hpp"

namespace pumpstudy {

std::int64_t days_from_civil(int y, unsigned m, unsigned d) {
    y -= m <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

CivilDate civil_from_days(std::int64_t z) {
    z += 719468;
    const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const std::int64_t y = static_cast<std::int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    const unsigned d = doy - (153 * mp + 2) / 5 + 1;
    const unsigned m = mp + (mp < 10 ? 3 : -9);
    return {static_cast<int>(y + (m <= 2)), m, d};
}

std::int64_t parse_iso8601_utc(const std::string& s) {
    int y = 0;
    unsigned mo = 0, d = 0, h = 0, mi = 0, se = 0;
    int consumed = 0;
    if (std::sscanf(s.c_str(), "%4d-%2u-%2u%*1[T ]%2u:%2u:%2u%n", &y, &mo, &d, &h, &mi, &se,
                    &consumed) != 6) {
        throw ParseError("malformed ISO-8601 timestamp: '" + s + "'");
    }
    std::size_t pos = static_cast<std::size_t>(consumed);
    // Skip fractional seconds.
    if (pos < s.size() && s[pos] == '.') {
        ++pos;
        while (pos < s.size() && s[pos] >= '0' && s[pos] <= '9') ++pos;
    }
    std::string rest = s.substr(pos);
    if (!rest.empty() && rest != "Z" && rest != "+00:00" && rest != "-00:00" && rest != "+0000") {
        throw ParseError("non-UTC or trailing garbage in timestamp: '" + s + "'");
    }
    if (mo < 1 || mo > 12 || d < 1 || d > 31 || h > 23 || mi > 59 || se > 60) {
        throw ParseError("out-of-range field in timestamp: '" + s + "'");
    }
    return days_from_civil(y, mo, d) * 86400 + h * 3600 + mi * 60 + se;
}

std::string format_iso8601_utc(std::int64_t epoch_seconds) {
    std::int64_t days = epoch_seconds / 86400;
    std::int64_t sod = epoch_seconds % 86400;
    if (sod < 0) {
        sod += 86400;
        --days;
    }
    const CivilDate cd = civil_from_days(days);
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%04d-%02u-%02uT%02lld:%02lld:%02lldZ", cd.year, cd.month,
                  cd.day, static_cast<long long>(sod / 3600),
                  static_cast<long long>((sod % 3600) / 60), static_cast<long long>(sod % 60));
    return buf;
}

std::string format_date(std::int64_t epoch_days) {
    const CivilDate cd = civil_from_days(epoch_days);
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u", cd.year, cd.month, cd.day);
    return buf;
}

std::int64_t week_start_day(std::int64_t epoch_days) {
    // 1970-01-01 was a Thursday; with Monday = 0 its weekday index is 3.
    std::int64_t wd = (epoch_days + 3) % 7;
    if (wd < 0) wd += 7;
    return epoch_days - wd;
}

}  // namespace pumpstudy
