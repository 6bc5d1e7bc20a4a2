#pragma once

namespace expectflow {

/// Mean daily temperature as the average of the daily extremes.
/// Throws validation_error when tmin > tmax.
double daily_mean_temp(double tmin_c, double tmax_c);

/// Extraterrestrial radiation [MJ m-2 day-1] from the standard astronomic
/// formulas (solar declination, inverse relative distance, sunset hour
/// angle). day_of_year 366 is treated as 365 in the angle terms.
double extraterrestrial_radiation(double latitude_rad, int day_of_year);

/// Temperature-based daily PET [mm/day]:
///   Re * 0.408 * (tmean + 5) / 100   when tmean + 5 > 0, else 0.
double oudin_pet(double tmean_c, double latitude_rad, int day_of_year);

}  // namespace expectflow
