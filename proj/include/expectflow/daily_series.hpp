#pragma once

#include <span>
#include <vector>

#include "expectflow/date.hpp"

namespace expectflow {

enum class Unit { MmPerDay, DegC };

/// A date-aligned contiguous daily sequence. Index i holds the value for
/// start + i days; there are no gaps by construction.
struct DailySeries {
    Date start{};
    std::vector<double> values;
    Unit unit = Unit::MmPerDay;

    long size() const { return static_cast<long>(values.size()); }
    Date date_at(long i) const { return start + std::chrono::days{i}; }
    Date last_date() const { return date_at(size() - 1); }
    DateRange range() const { return DateRange{start, last_date()}; }
    bool covers(const DateRange& r) const { return size() > 0 && range().contains(r); }

    /// Index of a calendar day; caller guarantees coverage.
    long index_of(Date d) const { return (d - start).count(); }

    /// View of the values inside [r.first, r.last]. Throws validation_error
    /// when the series does not cover r.
    std::span<const double> slice(const DateRange& r) const;

    /// Copy restricted to r, same unit.
    DailySeries window(const DateRange& r) const;
};

/// Throws validation_error unless both series start on the same day and have
/// equal length.
void require_aligned(const DailySeries& a, const DailySeries& b, const char* what);

}  // namespace expectflow
