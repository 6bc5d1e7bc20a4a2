#pragma once

#include <chrono>
#include <string>

namespace expectflow {

/// Calendar day. Thin alias over std::chrono so day arithmetic stays integral.
using Date = std::chrono::sys_days;

Date make_date(int year, unsigned month, unsigned day);

/// Parses strict ISO-8601 "YYYY-MM-DD". Throws validation_error on malformed
/// or non-existent dates.
Date parse_date(const std::string& text);

std::string format_date(Date d);

int year_of(Date d);

/// 1-based day of year (1..366).
int day_of_year(Date d);

/// Inclusive calendar interval [first, last].
struct DateRange {
    Date first;
    Date last;

    long size() const { return (last - first).count() + 1; }
    bool contains(Date d) const { return d >= first && d <= last; }
    bool contains(const DateRange& other) const {
        return other.first >= first && other.last <= last;
    }
};

/// Validated range; throws validation_error when last precedes first.
DateRange make_range(Date first, Date last);

}  // namespace expectflow
