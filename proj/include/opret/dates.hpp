#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace opret {

struct CivilDate {
    int year = 1970;
    unsigned month = 1; // 1..12
    unsigned day = 1;   // 1..31
};

// Proleptic-Gregorian day arithmetic; all conversions are UTC.
std::int64_t days_from_civil(const CivilDate& date);
CivilDate civil_from_days(std::int64_t days);

std::int64_t date_to_epoch(const CivilDate& date); // midnight UTC
CivilDate epoch_to_civil(std::int64_t epoch_seconds);

// "YYYY-MM-DD"; throws std::invalid_argument on malformed input.
std::int64_t parse_date_utc(std::string_view text);

std::string format_date(std::int64_t epoch_seconds, char separator = '-');

} // namespace opret
