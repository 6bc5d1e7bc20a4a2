#include "expectflow/date.hpp"

#include <cstdio>

#include "expectflow/errors.hpp"

namespace expectflow {

Date make_date(int year, unsigned month, unsigned day) {
    std::chrono::year_month_day ymd{std::chrono::year{year}, std::chrono::month{month},
                                    std::chrono::day{day}};
    if (!ymd.ok()) {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "invalid calendar date %04d-%02u-%02u", year, month, day);
        throw validation_error(buf);
    }
    return std::chrono::sys_days{ymd};
}

Date parse_date(const std::string& text) {
    int y = 0;
    unsigned m = 0, d = 0;
    char tail = '\0';
    if (std::sscanf(text.c_str(), "%d-%u-%u%c", &y, &m, &d, &tail) != 3 ||
        text.size() != 10 || text[4] != '-' || text[7] != '-') {
        throw validation_error("cannot parse date '" + text + "' (expected YYYY-MM-DD)");
    }
    return make_date(y, m, d);
}

std::string format_date(Date d) {
    std::chrono::year_month_day ymd{d};
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u", int(ymd.year()), unsigned(ymd.month()),
                  unsigned(ymd.day()));
    return buf;
}

int year_of(Date d) {
    return int(std::chrono::year_month_day{d}.year());
}

int day_of_year(Date d) {
    const auto y = std::chrono::year_month_day{d}.year();
    const Date jan1{std::chrono::sys_days{y / std::chrono::January / 1}};
    return int((d - jan1).count()) + 1;
}

DateRange make_range(Date first, Date last) {
    if (last < first) {
        throw validation_error("date range end " + format_date(last) + " precedes start " +
                               format_date(first));
    }
    return DateRange{first, last};
}

}  // namespace expectflow
