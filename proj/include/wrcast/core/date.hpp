#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <string_view>

namespace wrcast {

using Date = std::chrono::sys_days;

/// Parses `YYYY-MM-DD`, optionally followed by a time part which is ignored.
std::optional<Date> parse_date(std::string_view text);

std::string format_date(Date d);

inline Date make_date(int y, unsigned m, unsigned d) {
    return std::chrono::sys_days{std::chrono::year{y} / std::chrono::month{m} / std::chrono::day{d}};
}

struct CalendarFields {
    int year;
    int month;    // 1..12
    int day;      // 1..31
    int weekday;  // 0 = Monday .. 6 = Sunday
};

CalendarFields calendar_fields(Date d);

}  // namespace wrcast
