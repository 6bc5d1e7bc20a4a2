#include "expectflow/risk_measures.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace expectflow {

namespace {

void require_finite(double v, const char* name) {
    if (!std::isfinite(v)) {
        throw std::invalid_argument(std::string(name) + " must be finite");
    }
}

void require_non_empty(std::span<const double> sample) {
    if (sample.empty()) {
        throw std::invalid_argument("empty sample");
    }
}

/// Neumaier-compensated sum; the expectile first-order condition cancels two
/// large partial sums, so plain accumulation would eat the tolerance on
/// 1e7-element samples.
struct CompensatedSum {
    double sum = 0.0;
    double comp = 0.0;

    void add(double v) {
        const double t = sum + v;
        if (std::abs(sum) >= std::abs(v)) {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    double value() const { return sum + comp; }
};

// g(e) and its slope in one pass. Slope is the left derivative
// -(tau * n_above + (1 - tau) * n_not_above); any negative value works for
// the safeguarded Newton step since g is piecewise linear and decreasing.
struct FocEval {
    double g;
    double slope;
};

FocEval expectile_foc(std::span<const double> sample, double tau, double e) {
    CompensatedSum above;  // sum of (x_i - e) over x_i > e
    CompensatedSum below;  // sum of (e - x_i) over x_i <= e
    long n_above = 0;
    for (double x : sample) {
        if (x > e) {
            above.add(x - e);
            ++n_above;
        } else {
            below.add(e - x);
        }
    }
    const long n = static_cast<long>(sample.size());
    const double g = tau * above.value() - (1.0 - tau) * below.value();
    const double slope = -(tau * double(n_above) + (1.0 - tau) * double(n - n_above));
    return FocEval{g, slope};
}

}  // namespace

Level::Level(double value) : value_(value) {
    if (!(value > 0.0) || !(value < 1.0)) {
        throw std::invalid_argument("level must lie strictly inside (0,1), got " +
                                    std::to_string(value));
    }
}

double quantile_loss(double predicted, double observed, Level a) {
    require_finite(predicted, "predicted");
    require_finite(observed, "observed");
    const double indicator = observed <= predicted ? 1.0 : 0.0;
    return (predicted - observed) * (indicator - a.value());
}

double expectile_loss(double predicted, double observed, Level tau) {
    require_finite(predicted, "predicted");
    require_finite(observed, "observed");
    const double d = predicted - observed;
    const double indicator = observed <= predicted ? 1.0 : 0.0;
    return d * d * std::abs(indicator - tau.value());
}

double sample_quantile(std::span<const double> sample, Level a) {
    require_non_empty(sample);
    const long n = static_cast<long>(sample.size());
    // Smallest k with k/n >= a, computed in extended precision so the
    // convention survives a*n landing on an integer.
    const long double an = static_cast<long double>(a.value()) * static_cast<long double>(n);
    long k = static_cast<long>(std::ceil(double(an)));
    while (k > 1 && static_cast<long double>(k - 1) >= an) --k;
    while (static_cast<long double>(k) < an) ++k;
    k = std::clamp(k, 1L, n);

    std::vector<double> work(sample.begin(), sample.end());
    std::nth_element(work.begin(), work.begin() + (k - 1), work.end());
    return work[static_cast<size_t>(k - 1)];
}

double sample_expectile(std::span<const double> sample, Level tau) {
    require_non_empty(sample);
    const double t = tau.value();

    auto [lo_it, hi_it] = std::minmax_element(sample.begin(), sample.end());
    double lo = *lo_it;
    double hi = *hi_it;
    if (lo == hi) return lo;

    // g(lo) >= 0 >= g(hi); keep the bracket while Newton does the work.
    // g is piecewise linear, so once the final segment is reached the Newton
    // step lands on the root up to rounding.
    double e = lo + t * (hi - lo);
    for (int iter = 0; iter < 200; ++iter) {
        const FocEval f = expectile_foc(sample, t, e);
        if (f.g > 0.0) {
            lo = e;
        } else if (f.g < 0.0) {
            hi = e;
        } else {
            return e;
        }
        double next = e - f.g / f.slope;
        if (!(next >= lo && next <= hi)) {
            next = 0.5 * (lo + hi);
        }
        const double step = std::abs(next - e);
        e = next;
        if (step <= 1e-10 * (1.0 + std::abs(e))) break;
    }
    return e;
}

double expectile_argmin_oracle(std::span<const double> sample, Level tau) {
    require_non_empty(sample);
    double a = *std::min_element(sample.begin(), sample.end());
    double b = *std::max_element(sample.begin(), sample.end());
    if (a == b) return a;

    const auto mean_loss = [&](double r) {
        double acc = 0.0;
        for (double x : sample) acc += expectile_loss(r, x, tau);
        return acc / double(sample.size());
    };

    // Golden-section on the strictly convex empirical objective.
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = mean_loss(c);
    double fd = mean_loss(d);
    while (b - a > 1e-8) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = mean_loss(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = mean_loss(d);
        }
    }
    return 0.5 * (a + b);
}

double expectile_level_of_value(std::span<const double> sample, double e) {
    require_non_empty(sample);
    require_finite(e, "e");
    CompensatedSum below;
    CompensatedSum total;
    for (double x : sample) {
        const double d = std::abs(x - e);
        total.add(d);
        if (x <= e) below.add(d);
    }
    const double denom = total.value();
    if (denom == 0.0) return 0.5;  // all residuals zero: ideal-simulation convention
    return below.value() / denom;
}

double prediction_expectile_level(std::span<const double> observed,
                                  std::span<const double> simulated) {
    if (observed.size() != simulated.size()) {
        throw std::invalid_argument("prediction_expectile_level: length mismatch");
    }
    require_non_empty(observed);
    CompensatedSum below;
    CompensatedSum total;
    for (size_t i = 0; i < observed.size(); ++i) {
        const double d = std::abs(observed[i] - simulated[i]);
        total.add(d);
        if (observed[i] <= simulated[i]) below.add(d);
    }
    const double denom = total.value();
    if (denom == 0.0) return 0.5;
    return below.value() / denom;
}

double prediction_expectile_level(const DailySeries& observed, const DailySeries& simulated) {
    require_aligned(observed, simulated, "prediction_expectile_level");
    return prediction_expectile_level(std::span<const double>(observed.values),
                                      std::span<const double>(simulated.values));
}

double return_period_from_level(Level level) {
    return 1.0 / (1.0 - level.value());
}

LossKind loss_kind_from_string(const std::string& name) {
    if (name == "expectile") return LossKind::Expectile;
    if (name == "quantile") return LossKind::Quantile;
    throw std::invalid_argument("unknown loss '" + name + "' (expected expectile or quantile)");
}

std::string to_string(LossKind kind) {
    return kind == LossKind::Expectile ? "expectile" : "quantile";
}

double pointwise_loss(double predicted, double observed, LossKind kind, Level level) {
    return kind == LossKind::Expectile ? expectile_loss(predicted, observed, level)
                                       : quantile_loss(predicted, observed, level);
}

double mean_loss(std::span<const double> observed, std::span<const double> simulated,
                 LossKind kind, Level level) {
    if (observed.size() != simulated.size()) {
        throw std::invalid_argument("mean_loss: length mismatch");
    }
    require_non_empty(observed);
    const double t = level.value();
    CompensatedSum acc;
    if (kind == LossKind::Expectile) {
        for (size_t i = 0; i < observed.size(); ++i) {
            const double d = simulated[i] - observed[i];
            acc.add(d * d * std::abs((observed[i] <= simulated[i] ? 1.0 : 0.0) - t));
        }
    } else {
        for (size_t i = 0; i < observed.size(); ++i) {
            const double d = simulated[i] - observed[i];
            acc.add(d * ((observed[i] <= simulated[i] ? 1.0 : 0.0) - t));
        }
    }
    return acc.value() / double(observed.size());
}

}  // namespace expectflow
