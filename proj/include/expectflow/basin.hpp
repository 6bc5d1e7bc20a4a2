#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "expectflow/daily_series.hpp"

namespace expectflow {

/// A basin's daily record plus the station metadata needed downstream.
/// All series share the same start date and length by construction.
struct BasinRecord {
    std::string basin_id;
    std::optional<double> latitude_deg;
    std::optional<double> area_km2;
    Date start{};
    std::vector<double> precip_mm;
    std::vector<double> tmin_c;
    std::vector<double> tmax_c;
    std::vector<double> q_mm;
    std::vector<double> pet_mm;  // from the file, or filled by Oudin

    long size() const { return static_cast<long>(precip_mm.size()); }
    DateRange range() const;
    DailySeries precip_series() const;
    DailySeries pet_series() const;
    DailySeries streamflow_series() const;
};

struct LoadOptions {
    /// Treat the q column as m3/s and convert to mm/day via area_km2 from
    /// the sidecar; off by default.
    bool convert_streamflow_m3s = false;
    /// Overrides the sidecar latitude (degrees) when set.
    std::optional<double> latitude_deg;
};

/// Reads `date,precip_mm,tmin_c,tmax_c,q_mm[,pet_mm]` with ISO-8601 dates,
/// plus the optional `<stem>.meta.json` sidecar (basin_id, latitude_deg,
/// area_km2). Validates contiguity, finiteness, sign constraints and
/// tmin <= tmax, naming the offending line or date. When the file has no
/// pet column, PET is computed from the Oudin formula (latitude required).
BasinRecord load_basin_csv(const std::string& path, const LoadOptions& options = {});

/// Writes the CSV (with pet column) and the sidecar. load(write(r)) == r.
void write_basin_csv(const BasinRecord& record, const std::string& path);

/// Deterministic test fixture: sinusoidal temperatures, seeded intermittent
/// precipitation, streamflow generated by the four-parameter model at a
/// fixed parameter set with seeded multiplicative noise.
BasinRecord synth_basin(std::uint64_t seed, int n_years, double noise_amplitude = 0.2);

/// The parameter set behind synth_basin's streamflow.
struct SynthTruth {
    double x1, x2, x3, x4;
    double latitude_deg;
};
SynthTruth synth_truth();

}  // namespace expectflow
