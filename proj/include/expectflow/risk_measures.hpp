#pragma once

#include <span>
#include <string>

#include "expectflow/daily_series.hpp"

namespace expectflow {

/// Probability level in the open interval (0,1). Used both as a quantile
/// level and as an expectile level.
class Level {
public:
    explicit Level(double value);
    double value() const { return value_; }

private:
    double value_;
};

/// Asymmetric piecewise-linear score (r - x) * (1(x <= r) - a).
/// Zero iff r == x; reduces to |r - x| / 2 at a = 0.5.
double quantile_loss(double predicted, double observed, Level a);

/// Asymmetric squared score (r - x)^2 * |1(x <= r) - tau|.
/// Zero iff r == x; reduces to (r - x)^2 / 2 at tau = 0.5.
double expectile_loss(double predicted, double observed, Level tau);

/// Left-continuous generalized inverse of the empirical CDF: the smallest
/// order statistic x_(k) with k/n >= a. No interpolation.
double sample_quantile(std::span<const double> sample, Level a);

/// Unique root of g(e) = tau * sum(x_i - e)^+ - (1 - tau) * sum(e - x_i)^+.
/// g is strictly decreasing, so the root is bracketed by [min, max] and
/// refined by safeguarded Newton steps; convergence at |de| <= 1e-10*(1+|e|).
/// Equals the arithmetic mean at tau = 0.5.
double sample_expectile(std::span<const double> sample, Level tau);

/// Independent estimator for cross-checking sample_expectile: minimizes the
/// empirical mean expectile loss by golden-section search on [min, max] to
/// tolerance 1e-8. Shares no code path with the root-finder.
double expectile_argmin_oracle(std::span<const double> sample, Level tau);

/// Sample analogue of the defining ratio
///   sum |x_i - e| * 1(x_i <= e) / sum |x_i - e|.
/// Monotone non-decreasing in e; returns 0.5 when every x_i equals e.
double expectile_level_of_value(std::span<const double> sample, double e);

/// Same ratio over paired (observation, simulation) values; the predictions
/// play the role of e pointwise. 0.5 for a perfect match.
double prediction_expectile_level(std::span<const double> observed,
                                  std::span<const double> simulated);
double prediction_expectile_level(const DailySeries& observed, const DailySeries& simulated);

/// 1 / (1 - level), in the block/sampling time unit (years for annual levels).
double return_period_from_level(Level level);

enum class LossKind { Expectile, Quantile };

LossKind loss_kind_from_string(const std::string& name);
std::string to_string(LossKind kind);

double pointwise_loss(double predicted, double observed, LossKind kind, Level level);

/// Mean per-day loss over paired values; the calibration objective and the
/// evaluation score are both this quantity on their respective ranges.
double mean_loss(std::span<const double> observed, std::span<const double> simulated,
                 LossKind kind, Level level);

}  // namespace expectflow
