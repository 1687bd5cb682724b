#include "opret/dates.hpp"

#include <cstdio>
#include <stdexcept>

namespace opret {

// Standard civil-from-days/days-from-civil shift-era algorithms.
std::int64_t days_from_civil(const CivilDate& date) {
    std::int64_t y = date.year;
    y -= date.month <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const auto yoe = static_cast<std::uint64_t>(y - era * 400);
    const std::uint64_t doy = (153 * (date.month + (date.month > 2 ? -3 : 9)) + 2) / 5 + date.day - 1;
    const std::uint64_t doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

CivilDate civil_from_days(std::int64_t days) {
    days += 719468;
    const std::int64_t era = (days >= 0 ? days : days - 146096) / 146097;
    const auto doe = static_cast<std::uint64_t>(days - era * 146097);
    const std::uint64_t yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const std::int64_t y = static_cast<std::int64_t>(yoe) + era * 400;
    const std::uint64_t doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const std::uint64_t mp = (5 * doy + 2) / 153;
    const auto d = static_cast<unsigned>(doy - (153 * mp + 2) / 5 + 1);
    const auto m = static_cast<unsigned>(mp + (mp < 10 ? 3 : -9));
    return {static_cast<int>(y + (m <= 2)), m, d};
}

std::int64_t date_to_epoch(const CivilDate& date) {
    return days_from_civil(date) * 86400;
}

CivilDate epoch_to_civil(std::int64_t epoch_seconds) {
    std::int64_t days = epoch_seconds / 86400;
    if (epoch_seconds < 0 && epoch_seconds % 86400 != 0)
        --days;
    return civil_from_days(days);
}

std::int64_t parse_date_utc(std::string_view text) {
    int year = 0;
    unsigned month = 0, day = 0;
    char extra = 0;
    std::string copy(text);
    if (std::sscanf(copy.c_str(), "%d-%u-%u%c", &year, &month, &day, &extra) != 3 ||
        month < 1 || month > 12 || day < 1 || day > 31)
        throw std::invalid_argument("date must be YYYY-MM-DD: " + copy);
    return date_to_epoch({year, month, day});
}

std::string format_date(std::int64_t epoch_seconds, char separator) {
    CivilDate d = epoch_to_civil(epoch_seconds);
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d%c%02u%c%02u", d.year, separator, d.month, separator,
                  d.day);
    return buf;
}

} // namespace opret
