#pragma once

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "expectflow/model.hpp"
#include "expectflow/risk_measures.hpp"

namespace expectflow {

/// What to minimize: which loss, at which level, scored over which days.
/// The warm-up strictly precedes the calibration range and is excluded
/// from the score.
struct Objective {
    LossKind loss_kind = LossKind::Expectile;
    Level level{0.5};
    DateRange warmup;
    DateRange calibration;
};

void validate(const Objective& o, const DateRange& record);

struct SearchConfig {
    int screen_count = 200;
    double initial_step = 0.25;  // in transformed (log / asinh) coordinates
    double step_shrink = 0.5;
    double min_step = 1e-3;
    long max_evals = 20000;
    std::uint64_t seed = 0;
};

void validate(const SearchConfig& c);

struct CalibResult {
    ModelParams params;
    double objective_value = 0.0;
    long n_evals = 0;
    std::vector<std::pair<long, double>> trace;  // (eval index, accepted objective)
    std::uint64_t seed = 0;
};

/// Mean per-day loss over the calibration range: simulates from the start
/// of the warm-up, discards the warm-up, scores the rest.
double objective_score(const ModelParams& params, ModelId model, const DailySeries& precip,
                       const DailySeries& pet, const DailySeries& observed,
                       const Objective& objective);

/// Evaluates `screen_count` points of a seeded Halton sequence (with
/// Cranley-Patterson rotation) mapped into the transformed search box.
/// Deterministic given the seed.
std::pair<ModelParams, double> screen_candidates(
    ModelId model, const std::function<double(const ModelParams&)>& objective,
    const SearchConfig& config);

/// Screening followed by coordinate pattern search in transformed space:
/// each sweep tries +/-step on every coordinate and takes the best strict
/// improvement; a sweep without improvement halves the step. Stops below
/// min_step or at max_evals. The accepted trace is strictly decreasing.
CalibResult calibrate(ModelId model, const DailySeries& precip, const DailySeries& pet,
                      const DailySeries& observed, const Objective& objective,
                      const SearchConfig& config);

}  // namespace expectflow
