#include "expectflow/daily_series.hpp"

#include "expectflow/errors.hpp"

namespace expectflow {

std::span<const double> DailySeries::slice(const DateRange& r) const {
    if (!covers(r)) {
        throw validation_error("series [" + format_date(start) + ", " + format_date(last_date()) +
                               "] does not cover requested range [" + format_date(r.first) + ", " +
                               format_date(r.last) + "]");
    }
    return std::span<const double>(values).subspan(static_cast<size_t>(index_of(r.first)),
                                                   static_cast<size_t>(r.size()));
}

DailySeries DailySeries::window(const DateRange& r) const {
    auto s = slice(r);
    return DailySeries{r.first, std::vector<double>(s.begin(), s.end()), unit};
}

void require_aligned(const DailySeries& a, const DailySeries& b, const char* what) {
    if (a.start != b.start || a.size() != b.size()) {
        throw validation_error(std::string(what) + ": series misaligned (" + format_date(a.start) +
                               " n=" + std::to_string(a.size()) + " vs " + format_date(b.start) +
                               " n=" + std::to_string(b.size()) + ")");
    }
}

}  // namespace expectflow
