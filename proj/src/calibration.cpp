#include "expectflow/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "expectflow/errors.hpp"

namespace expectflow {

namespace {

constexpr int kHaltonPrimes[] = {2, 3, 5, 7, 11, 13};

double radical_inverse(int base, long index) {
    double result = 0.0;
    double digit_weight = 1.0 / base;
    while (index > 0) {
        result += double(index % base) * digit_weight;
        index /= base;
        digit_weight /= base;
    }
    return result;
}

struct SearchBox {
    std::vector<double> lo;  // transformed lower bounds
    std::vector<double> hi;
};

SearchBox search_box(ModelId model) {
    SearchBox box;
    for (const ParamAxis& axis : param_axes(model)) {
        box.lo.push_back(axis.to_search(axis.lower));
        box.hi.push_back(axis.to_search(axis.upper));
    }
    return box;
}

ModelParams decode(ModelId model, const std::vector<double>& transformed) {
    const auto& axes = param_axes(model);
    std::vector<double> natural(axes.size());
    for (size_t i = 0; i < axes.size(); ++i) {
        double v = axes[i].from_search(transformed[i]);
        v = std::clamp(v, axes[i].lower, axes[i].upper);  // guard inverse round-off
        natural[i] = v;
    }
    return params_from_natural(model, natural);
}

double mean_loss_on_range(const DailySeries& observed, const DailySeries& simulated,
                          const DateRange& range, LossKind kind, Level level) {
    return mean_loss(observed.slice(range), simulated.slice(range), kind, level);
}

}  // namespace

void validate(const Objective& o, const DateRange& record) {
    if (!(o.warmup.last < o.calibration.first)) {
        throw validation_error("warm-up range must end strictly before the calibration range");
    }
    if (!record.contains(o.warmup) || !record.contains(o.calibration)) {
        throw validation_error("objective ranges are not covered by the forcing record [" +
                               format_date(record.first) + ", " + format_date(record.last) + "]");
    }
}

void validate(const SearchConfig& c) {
    if (c.screen_count < 1) throw validation_error("screen_count must be >= 1");
    if (!(c.step_shrink > 0.0 && c.step_shrink < 1.0)) {
        throw validation_error("step_shrink must lie in (0,1)");
    }
    if (!(c.min_step > 0.0 && c.min_step <= c.initial_step)) {
        throw validation_error("need 0 < min_step <= initial_step");
    }
    if (c.max_evals < 1) throw validation_error("max_evals must be >= 1");
}

double objective_score(const ModelParams& params, ModelId model, const DailySeries& precip,
                       const DailySeries& pet, const DailySeries& observed,
                       const Objective& objective) {
    validate(objective, precip.range());
    if (!observed.covers(objective.calibration)) {
        throw validation_error("observations do not cover the calibration range");
    }
    const DateRange sim_range{objective.warmup.first, objective.calibration.last};
    const DailySeries sim =
        simulate(model, params, precip.window(sim_range), pet.window(sim_range));
    return mean_loss_on_range(observed, sim, objective.calibration, objective.loss_kind,
                              objective.level);
}

namespace {

std::pair<std::vector<double>, double> screen_transformed(
    ModelId model, const std::function<double(const ModelParams&)>& objective,
    const SearchConfig& config, long point_budget) {
    const size_t dim = param_axes(model).size();
    const SearchBox box = search_box(model);

    // Cranley-Patterson rotation: one seeded shift per dimension, applied
    // mod 1 to the Halton points.
    std::mt19937_64 rng(config.seed);
    std::vector<double> shift(dim);
    for (double& s : shift) s = double(rng() >> 11) * 0x1.0p-53;

    const long n_points = std::min<long>(config.screen_count, point_budget);
    double best_score = std::numeric_limits<double>::infinity();
    std::vector<double> best_point;
    for (long i = 0; i < n_points; ++i) {
        std::vector<double> t(dim);
        for (size_t d = 0; d < dim; ++d) {
            double u = radical_inverse(kHaltonPrimes[d], i + 1) + shift[d];
            u -= std::floor(u);
            t[d] = box.lo[d] + u * (box.hi[d] - box.lo[d]);
        }
        const double score = objective(decode(model, t));
        if (std::isfinite(score) && score < best_score) {
            best_score = score;
            best_point = std::move(t);
        }
    }
    if (best_point.empty()) {
        throw validation_error("screening failed: no candidate produced a finite objective");
    }
    return {std::move(best_point), best_score};
}

}  // namespace

std::pair<ModelParams, double> screen_candidates(
    ModelId model, const std::function<double(const ModelParams&)>& objective,
    const SearchConfig& config) {
    validate(config);
    auto [point, score] = screen_transformed(model, objective, config, config.screen_count);
    return {decode(model, point), score};
}

CalibResult calibrate(ModelId model, const DailySeries& precip, const DailySeries& pet,
                      const DailySeries& observed, const Objective& objective,
                      const SearchConfig& config) {
    validate(config);
    validate(objective, precip.range());
    require_aligned(precip, pet, "calibrate");
    if (!observed.covers(objective.calibration)) {
        throw validation_error("observations do not cover the calibration range");
    }

    // Pre-slice once; the search evaluates the model thousands of times.
    const DateRange sim_range{objective.warmup.first, objective.calibration.last};
    const DailySeries precip_w = precip.window(sim_range);
    const DailySeries pet_w = pet.window(sim_range);
    const std::span<const double> obs_slice = observed.slice(objective.calibration);
    const size_t calib_offset =
        static_cast<size_t>((objective.calibration.first - sim_range.first).count());

    long n_evals = 0;
    const auto evaluate = [&](const ModelParams& p) {
        ++n_evals;
        const DailySeries sim = simulate(model, p, precip_w, pet_w);
        const std::span<const double> sim_slice =
            std::span<const double>(sim.values).subspan(calib_offset, obs_slice.size());
        return mean_loss(obs_slice, sim_slice, objective.loss_kind, objective.level);
    };

    CalibResult result;
    result.seed = config.seed;

    auto [current, current_score] = screen_transformed(model, evaluate, config, config.max_evals);
    result.trace.emplace_back(n_evals, current_score);

    const size_t dim = param_axes(model).size();
    const SearchBox box = search_box(model);

    double step = config.initial_step;
    while (step > config.min_step && n_evals < config.max_evals) {
        bool improved_in_sweep = false;
        for (size_t d = 0; d < dim && n_evals < config.max_evals; ++d) {
            double best_coord = current[d];
            double best_score = current_score;
            for (double sign : {+1.0, -1.0}) {
                const double trial = std::clamp(current[d] + sign * step, box.lo[d], box.hi[d]);
                if (trial == current[d]) continue;
                if (n_evals >= config.max_evals) break;
                std::vector<double> t = current;
                t[d] = trial;
                const double score = evaluate(decode(model, t));
                if (score < best_score) {
                    best_score = score;
                    best_coord = trial;
                }
            }
            if (best_score < current_score) {
                current[d] = best_coord;
                current_score = best_score;
                result.trace.emplace_back(n_evals, current_score);
                improved_in_sweep = true;
            }
        }
        if (!improved_in_sweep) step *= config.step_shrink;
    }

    result.params = decode(model, current);
    result.objective_value = current_score;
    result.n_evals = n_evals;
    return result;
}

}  // namespace expectflow
