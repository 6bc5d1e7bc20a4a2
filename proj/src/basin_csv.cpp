#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "expectflow/basin.hpp"
#include "expectflow/errors.hpp"
#include "expectflow/pet.hpp"

namespace expectflow {

namespace {

constexpr double kDegToRad = 3.14159265358979323846 / 180.0;

std::string sidecar_path(const std::string& csv_path) {
    const auto dot = csv_path.rfind(".csv");
    if (dot == std::string::npos) return csv_path + ".meta.json";
    return csv_path.substr(0, dot) + ".meta.json";
}

std::string stem_of(const std::string& path) {
    auto slash = path.find_last_of("/\\");
    std::string name = slash == std::string::npos ? path : path.substr(slash + 1);
    const auto dot = name.rfind(".csv");
    if (dot != std::string::npos) name = name.substr(0, dot);
    return name;
}

double parse_double(const std::string& token, const std::string& path, long line_no,
                    const char* column) {
    try {
        size_t pos = 0;
        const double v = std::stod(token, &pos);
        if (pos != token.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw io_error(path + ":" + std::to_string(line_no) + ": cannot parse " + column +
                       " value '" + token + "'");
    }
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

void check_value(double v, double min_allowed, const char* column, const std::string& path,
                 const std::string& date_text) {
    if (!std::isfinite(v)) {
        throw validation_error(path + ": non-finite " + column + " on " + date_text);
    }
    if (v < min_allowed) {
        throw validation_error(path + ": negative " + column + " on " + date_text);
    }
}

}  // namespace

DateRange BasinRecord::range() const {
    return DateRange{start, start + std::chrono::days{size() - 1}};
}

DailySeries BasinRecord::precip_series() const {
    return DailySeries{start, precip_mm, Unit::MmPerDay};
}

DailySeries BasinRecord::pet_series() const {
    return DailySeries{start, pet_mm, Unit::MmPerDay};
}

DailySeries BasinRecord::streamflow_series() const {
    return DailySeries{start, q_mm, Unit::MmPerDay};
}

BasinRecord load_basin_csv(const std::string& path, const LoadOptions& options) {
    std::ifstream in(path);
    if (!in) {
        throw io_error("cannot open basin file '" + path + "'");
    }

    BasinRecord rec;
    rec.basin_id = stem_of(path);

    // Sidecar metadata is optional; only PET computation and unit
    // conversion actually need it.
    if (std::ifstream meta(sidecar_path(path)); meta) {
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(meta, nullptr, true, /*ignore_comments=*/true);
        } catch (const nlohmann::json::exception& e) {
            throw io_error(sidecar_path(path) + ": " + e.what());
        }
        if (j.contains("basin_id")) rec.basin_id = j.at("basin_id").get<std::string>();
        if (j.contains("latitude_deg")) rec.latitude_deg = j.at("latitude_deg").get<double>();
        if (j.contains("area_km2")) rec.area_km2 = j.at("area_km2").get<double>();
    }
    if (options.latitude_deg) rec.latitude_deg = options.latitude_deg;

    std::string line;
    long line_no = 0;
    if (!std::getline(in, line)) {
        throw io_error(path + ": empty file");
    }
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const bool has_pet = line == "date,precip_mm,tmin_c,tmax_c,q_mm,pet_mm";
    if (!has_pet && line != "date,precip_mm,tmin_c,tmax_c,q_mm") {
        throw io_error(path + ":1: unexpected header '" + line + "'");
    }
    const size_t n_cols = has_pet ? 6 : 5;

    Date expected{};
    bool first_row = true;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != n_cols) {
            throw io_error(path + ":" + std::to_string(line_no) + ": expected " +
                           std::to_string(n_cols) + " columns, found " +
                           std::to_string(fields.size()));
        }
        Date d;
        try {
            d = parse_date(fields[0]);
        } catch (const validation_error& e) {
            throw io_error(path + ":" + std::to_string(line_no) + ": " + e.what());
        }
        if (first_row) {
            rec.start = d;
            first_row = false;
        } else if (d != expected) {
            throw validation_error(path + ": contiguity error at line " + std::to_string(line_no) +
                                   ": expected " + format_date(expected) + ", found " +
                                   format_date(d));
        }
        expected = d + std::chrono::days{1};

        const double p = parse_double(fields[1], path, line_no, "precip_mm");
        const double tmin = parse_double(fields[2], path, line_no, "tmin_c");
        const double tmax = parse_double(fields[3], path, line_no, "tmax_c");
        const double q = parse_double(fields[4], path, line_no, "q_mm");
        check_value(p, 0.0, "precipitation", path, fields[0]);
        check_value(q, 0.0, "streamflow", path, fields[0]);
        if (!std::isfinite(tmin) || !std::isfinite(tmax)) {
            throw validation_error(path + ": non-finite temperature on " + fields[0]);
        }
        if (tmin > tmax) {
            throw validation_error(path + ": ordering error on " + fields[0] + ": tmin " +
                                   fields[2] + " exceeds tmax " + fields[3]);
        }
        rec.precip_mm.push_back(p);
        rec.tmin_c.push_back(tmin);
        rec.tmax_c.push_back(tmax);
        rec.q_mm.push_back(q);
        if (has_pet) {
            const double pet = parse_double(fields[5], path, line_no, "pet_mm");
            check_value(pet, 0.0, "PET", path, fields[0]);
            rec.pet_mm.push_back(pet);
        }
    }
    if (rec.precip_mm.empty()) {
        throw validation_error(path + ": no data rows");
    }

    if (options.convert_streamflow_m3s) {
        if (!rec.area_km2 || !(*rec.area_km2 > 0.0)) {
            throw validation_error(path + ": streamflow unit conversion requires positive " +
                                   "area_km2 in " + sidecar_path(path));
        }
        // m3/s over a day spread across the basin area: 86.4 / area.
        const double factor = 86.4 / *rec.area_km2;
        for (double& q : rec.q_mm) q *= factor;
    }

    if (!has_pet) {
        if (!rec.latitude_deg) {
            throw validation_error(path + ": no pet_mm column and no latitude available " +
                                   "(provide " + sidecar_path(path) + " or --latitude-deg)");
        }
        const double lat_rad = *rec.latitude_deg * kDegToRad;
        rec.pet_mm.resize(rec.precip_mm.size());
        for (long i = 0; i < rec.size(); ++i) {
            const Date d = rec.start + std::chrono::days{i};
            const double tmean = daily_mean_temp(rec.tmin_c[size_t(i)], rec.tmax_c[size_t(i)]);
            rec.pet_mm[size_t(i)] = oudin_pet(tmean, lat_rad, day_of_year(d));
        }
    }
    return rec;
}

void write_basin_csv(const BasinRecord& record, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw io_error("cannot write '" + path + "'");
    }
    out << "date,precip_mm,tmin_c,tmax_c,q_mm,pet_mm\n";
    char buf[256];
    for (long i = 0; i < record.size(); ++i) {
        const auto k = size_t(i);
        std::snprintf(buf, sizeof(buf), "%s,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                      format_date(record.start + std::chrono::days{i}).c_str(),
                      record.precip_mm[k], record.tmin_c[k], record.tmax_c[k], record.q_mm[k],
                      record.pet_mm[k]);
        out << buf;
    }
    if (!out) {
        throw io_error("write failed for '" + path + "'");
    }

    nlohmann::json meta;
    meta["basin_id"] = record.basin_id;
    if (record.latitude_deg) meta["latitude_deg"] = *record.latitude_deg;
    if (record.area_km2) meta["area_km2"] = *record.area_km2;
    std::ofstream meta_out(sidecar_path(path), std::ios::binary);
    if (!meta_out) {
        throw io_error("cannot write '" + sidecar_path(path) + "'");
    }
    meta_out << meta.dump(2) << "\n";
}

}  // namespace expectflow
