#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "expectflow/risk_measures.hpp"

namespace expectflow {

/// Generalized Pareto parameters (location, scale, shape).
struct GpParams {
    double mu = 0.0;
    double sigma = 1.0;
    double xi = 0.2;
};

void validate(const GpParams& p);

/// Inverse CDF: mu + sigma*((1-p)^(-xi) - 1)/xi, with the exponential limit
/// mu - sigma*ln(1-p) taken when |xi| < 1e-12. p must lie in [0,1).
double gp_inverse_cdf(double p, const GpParams& params);

double gp_cdf(double x, const GpParams& params);

/// Inverse-transform sample from a seeded mt19937_64; uniforms come from the
/// top 53 bits of the raw draws so identical seeds give bitwise-identical
/// samples on every platform.
std::vector<double> gp_sample(const GpParams& params, std::size_t n, std::uint64_t seed);

/// Identifier of the generator recorded in reports.
inline constexpr const char* kGeneratorId = "mt19937_64/u53";

struct TailReport {
    explicit TailReport(Level lv) : level(lv) {}

    Level level;
    double q_before = 0.0;
    double e_before = 0.0;
    double q_after = 0.0;
    double e_after = 0.0;
    double rp_before = 0.0;
    double rp_after = 0.0;
    std::vector<std::pair<double, double>> lower_level_quantile_deltas;  // (level, delta)
    std::vector<std::pair<double, double>> all_level_expectile_deltas;   // (level, delta)
    std::uint64_t seed = 0;
    std::size_t n = 0;
    GpParams gp;
    double shift = 0.0;
    std::string generator = kGeneratorId;
};

/// Draws the sample, takes the quantile/expectile at `level`, adds `shift`
/// to every element strictly greater than the sample quantile, recomputes,
/// and tracks quantile/expectile deltas at levels {0.5, 0.75, 0.9, 0.95}.
/// The quantile is untouched by construction while every expectile rises;
/// the return period of the original expectile value drops accordingly.
TailReport run_tail_experiment(const GpParams& params, std::size_t n, Level level, double shift,
                               std::uint64_t seed);

struct HistogramBin {
    double lo;
    double hi;
    std::size_t count;
};

struct TruncatedHistogram {
    std::vector<HistogramBin> bins;
    std::size_t dropped = 0;  // samples above hi, cut per the visualization convention
};

/// Fixed-width bins on [lo, hi]; samples above hi are dropped (and counted),
/// samples below lo cannot occur for GP with mu >= lo.
TruncatedHistogram gp_histogram(const std::vector<double>& sample, double bin_width, double lo,
                                double hi);

}  // namespace expectflow
