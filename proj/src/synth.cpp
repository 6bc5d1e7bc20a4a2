#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "expectflow/basin.hpp"
#include "expectflow/model.hpp"
#include "expectflow/pet.hpp"

namespace expectflow {

namespace {

double uniform53(std::mt19937_64& rng) {
    return double(rng() >> 11) * 0x1.0p-53;
}

// Box-Muller on the 53-bit uniforms keeps the fixture bit-reproducible
// across standard libraries.
double standard_normal(std::mt19937_64& rng) {
    const double u1 = 1.0 - uniform53(rng);  // (0, 1]
    const double u2 = uniform53(rng);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace

SynthTruth synth_truth() {
    return SynthTruth{320.0, -1.0, 90.0, 2.4, 40.0};
}

BasinRecord synth_basin(std::uint64_t seed, int n_years, double noise_amplitude) {
    if (n_years < 1) {
        throw std::invalid_argument("synthetic basin needs at least one year");
    }
    const SynthTruth truth = synth_truth();

    BasinRecord rec;
    rec.basin_id = "synth-" + std::to_string(seed);
    rec.latitude_deg = truth.latitude_deg;
    rec.start = make_date(1980, 1, 1);
    const Date end = make_date(1980 + n_years - 1, 12, 31);
    const long n_days = (end - rec.start).count() + 1;

    const double lat_rad = truth.latitude_deg * std::numbers::pi / 180.0;
    std::mt19937_64 rng(seed);

    rec.precip_mm.reserve(size_t(n_days));
    rec.tmin_c.reserve(size_t(n_days));
    rec.tmax_c.reserve(size_t(n_days));
    rec.pet_mm.reserve(size_t(n_days));

    for (long i = 0; i < n_days; ++i) {
        const Date d = rec.start + std::chrono::days{i};
        const double doy = double(day_of_year(d));
        const double season = std::cos(2.0 * std::numbers::pi * (doy - 20.0) / 365.25);

        const double tmean = 12.0 - 14.0 * season;
        rec.tmin_c.push_back(tmean - 5.0);
        rec.tmax_c.push_back(tmean + 5.0);

        // Wetter, weaker storms in winter; drier, heavier ones in summer.
        const double p_wet = 0.35 + 0.10 * season;
        const double mean_depth = 6.0 - 1.5 * season;
        const double u_wet = uniform53(rng);
        const double u_depth = uniform53(rng);
        const double p = u_wet < p_wet ? -mean_depth * std::log1p(-u_depth) : 0.0;
        rec.precip_mm.push_back(p);

        rec.pet_mm.push_back(oudin_pet(tmean, lat_rad, day_of_year(d)));
    }

    const Gr4jParams params{truth.x1, truth.x2, truth.x3, truth.x4};
    const DailySeries q_true = simulate(ModelId::Gr4j, params, rec.precip_series(),
                                        rec.pet_series());

    rec.q_mm.resize(size_t(n_days));
    for (long i = 0; i < n_days; ++i) {
        const double z = standard_normal(rng);
        const double factor = std::max(0.0, 1.0 + noise_amplitude * z);
        rec.q_mm[size_t(i)] = q_true.values[size_t(i)] * factor;
    }
    return rec;
}

}  // namespace expectflow
