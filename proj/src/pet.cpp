#include "expectflow/pet.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "expectflow/errors.hpp"

namespace expectflow {

double daily_mean_temp(double tmin_c, double tmax_c) {
    if (tmin_c > tmax_c) {
        throw validation_error("tmin " + std::to_string(tmin_c) + " exceeds tmax " +
                               std::to_string(tmax_c));
    }
    return 0.5 * (tmin_c + tmax_c);
}

double extraterrestrial_radiation(double latitude_rad, int day_of_year) {
    if (day_of_year < 1 || day_of_year > 366) {
        throw std::domain_error("day_of_year must lie in 1..366, got " +
                                std::to_string(day_of_year));
    }
    if (!(std::abs(latitude_rad) < std::numbers::pi / 2.0)) {
        throw std::domain_error("latitude must lie strictly inside (-pi/2, pi/2)");
    }
    const double j = double(std::min(day_of_year, 365));
    const double two_pi = 2.0 * std::numbers::pi;
    const double declination = 0.409 * std::sin(two_pi * j / 365.0 - 1.39);
    const double inv_rel_dist = 1.0 + 0.033 * std::cos(two_pi * j / 365.0);
    const double cos_ws = std::clamp(-std::tan(latitude_rad) * std::tan(declination), -1.0, 1.0);
    const double sunset_angle = std::acos(cos_ws);
    return (24.0 * 60.0 / std::numbers::pi) * 0.0820 * inv_rel_dist *
           (sunset_angle * std::sin(latitude_rad) * std::sin(declination) +
            std::cos(latitude_rad) * std::cos(declination) * std::sin(sunset_angle));
}

double oudin_pet(double tmean_c, double latitude_rad, int day_of_year) {
    if (day_of_year < 1 || day_of_year > 366) {
        throw std::domain_error("day_of_year must lie in 1..366, got " +
                                std::to_string(day_of_year));
    }
    if (tmean_c + 5.0 <= 0.0) return 0.0;
    const double re = extraterrestrial_radiation(latitude_rad, day_of_year);
    return re * 0.408 * (tmean_c + 5.0) / 100.0;
}

}  // namespace expectflow
