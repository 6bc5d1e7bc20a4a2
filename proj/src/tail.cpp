#include "expectflow/tail.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace expectflow {

namespace {

constexpr double kXiZeroSwitch = 1e-12;

double uniform53(std::mt19937_64& rng) {
    return double(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

void validate(const GpParams& p) {
    if (!(p.sigma > 0.0)) {
        throw std::invalid_argument("GP scale must be positive");
    }
    if (!std::isfinite(p.mu) || !std::isfinite(p.xi)) {
        throw std::invalid_argument("GP parameters must be finite");
    }
}

double gp_inverse_cdf(double p, const GpParams& params) {
    validate(params);
    if (!(p >= 0.0) || !(p < 1.0)) {
        throw std::domain_error("GP inverse CDF argument must lie in [0,1)");
    }
    if (std::abs(params.xi) < kXiZeroSwitch) {
        return params.mu - params.sigma * std::log1p(-p);
    }
    return params.mu + params.sigma * (std::pow(1.0 - p, -params.xi) - 1.0) / params.xi;
}

double gp_cdf(double x, const GpParams& params) {
    validate(params);
    const double z = (x - params.mu) / params.sigma;
    if (z <= 0.0) return 0.0;
    if (std::abs(params.xi) < kXiZeroSwitch) {
        return 1.0 - std::exp(-z);
    }
    const double base = 1.0 + params.xi * z;
    if (base <= 0.0) return 1.0;  // beyond the upper endpoint for xi < 0
    return 1.0 - std::pow(base, -1.0 / params.xi);
}

std::vector<double> gp_sample(const GpParams& params, std::size_t n, std::uint64_t seed) {
    validate(params);
    if (n == 0) {
        throw std::invalid_argument("empty sample requested");
    }
    std::mt19937_64 rng(seed);
    std::vector<double> out(n);
    for (double& v : out) {
        v = gp_inverse_cdf(uniform53(rng), params);
    }
    return out;
}

TailReport run_tail_experiment(const GpParams& params, std::size_t n, Level level, double shift,
                               std::uint64_t seed) {
    if (!(shift > 0.0)) {
        throw std::invalid_argument("tail shift must be positive");
    }
    const std::vector<double> before = gp_sample(params, n, seed);

    TailReport rep(level);
    rep.seed = seed;
    rep.n = n;
    rep.gp = params;
    rep.shift = shift;

    rep.q_before = sample_quantile(before, level);
    rep.e_before = sample_expectile(before, level);

    std::vector<double> after = before;
    for (double& v : after) {
        if (v > rep.q_before) v += shift;
    }

    rep.q_after = sample_quantile(after, level);
    rep.e_after = sample_expectile(after, level);

    // The expectile level of e_before in the unperturbed sample is `level`
    // itself, so its return period is exact; after the perturbation the same
    // value sits at a lower level and the period shortens.
    rep.rp_before = return_period_from_level(level);
    rep.rp_after = return_period_from_level(Level(expectile_level_of_value(after, rep.e_before)));

    const double grid[] = {0.5, 0.75, 0.9, 0.95};
    for (double g : grid) {
        const Level lg(g);
        rep.lower_level_quantile_deltas.emplace_back(
            g, sample_quantile(after, lg) - sample_quantile(before, lg));
        rep.all_level_expectile_deltas.emplace_back(
            g, sample_expectile(after, lg) - sample_expectile(before, lg));
    }
    return rep;
}

TruncatedHistogram gp_histogram(const std::vector<double>& sample, double bin_width, double lo,
                                double hi) {
    if (!(bin_width > 0.0) || !(hi > lo)) {
        throw std::invalid_argument("histogram needs positive bin width and hi > lo");
    }
    const auto nbins = static_cast<std::size_t>(std::ceil((hi - lo) / bin_width - 1e-9));
    TruncatedHistogram h;
    h.bins.reserve(nbins);
    for (std::size_t i = 0; i < nbins; ++i) {
        h.bins.push_back(HistogramBin{lo + double(i) * bin_width, lo + double(i + 1) * bin_width, 0});
    }
    for (double v : sample) {
        if (v > hi) {
            ++h.dropped;
            continue;
        }
        auto idx = static_cast<long>((v - lo) / bin_width);
        idx = std::max(0L, std::min(long(nbins) - 1, idx));
        ++h.bins[static_cast<std::size_t>(idx)].count;
    }
    return h;
}

}  // namespace expectflow
