#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "expectflow/calibration.hpp"
#include "expectflow/risk_measures.hpp"

namespace expectflow {

/// Chronological split: warm-up, calibration, evaluation. Contiguous,
/// non-overlapping, in order.
struct SplitSpec {
    DateRange warmup;
    DateRange calibration;
    DateRange evaluation;
};

/// Returns the spec unchanged or throws a validation_error naming the
/// violated interval (overlap, gap, ordering, or record coverage).
SplitSpec make_split(const DateRange& record, const SplitSpec& spec);

/// One (basin, model, loss, level) run on the evaluation period.
struct RunRecord {
    std::string basin_id;
    ModelId model = ModelId::Gr4j;
    LossKind loss_kind = LossKind::Expectile;
    double level = 0.5;
    CalibResult calib;
    double eval_score = 0.0;
    double diag_level = 0.5;       // sample expectile level of the predictions
    bool diag_degenerate = false;  // all residuals zero (flagged, value 0.5)
};

struct EvalOutcome {
    double eval_score;
    double diag_level;
    bool diag_degenerate;
};

/// Mean per-day loss plus the prediction expectile level, both restricted
/// to eval_range.
EvalOutcome evaluate_run(const DailySeries& simulated, const DailySeries& observed,
                         LossKind loss_kind, Level level, const DateRange& eval_range);

/// Relative score (bench - model) / bench; positive favors the model.
/// Requires bench > 0 (a zero benchmark is flagged upstream, not here).
double relative_score(double score_bench, double score_model);

/// Exact median; mean of the two middle values for even counts.
double exact_median(std::vector<double> values);

struct GroupedMedian {
    std::string model;
    std::string loss;
    double level;
    double median;
    std::size_t count;
};

struct HistogramRow {
    double lo;
    double hi;
    std::size_t count;
};

/// Fixed-width bins on [lo, hi]; values outside are clamped into the edge
/// bins so the counts always sum to the number of values.
std::vector<HistogramRow> histogram_truncated(const std::vector<double>& values, double bin_width,
                                              double lo = -0.5, double hi = 0.5);

struct LossCurveRow {
    LossKind kind;
    double level;
    double r;
    double loss;
};

/// Tabulates both losses on a prediction grid for a fixed materialization.
std::vector<LossCurveRow> loss_curve_table(double x, const std::vector<double>& levels,
                                           const std::vector<double>& r_grid);

/// One Eq.-style relative comparison row; undefined when the benchmark
/// score is zero.
struct RelativeScoreRow {
    std::string basin_id;
    ModelId model;
    LossKind loss_kind;
    double level;
    double eval_score;
    double bench_score;
    std::optional<double> rel_score;
};

struct AggregateReport {
    std::vector<RelativeScoreRow> relative_scores;
    std::vector<GroupedMedian> score_medians;      // of relative scores, by (model, loss, level)
    std::vector<GroupedMedian> diag_medians;       // of diag levels, by (model, loss, level)
    std::map<std::string, std::vector<HistogramRow>> score_histograms;  // key: model/loss
    std::vector<LossCurveRow> loss_curves;
    std::size_t undefined_scores = 0;  // zero-benchmark cases excluded from medians
    std::vector<std::string> warnings;
};

/// Folds per-run records into the report tables: Eq.-(10) rows against the
/// benchmark per (basin, loss, level), grouped medians, and truncated
/// relative-score histograms.
AggregateReport aggregate_records(const std::vector<RunRecord>& records, ModelId benchmark,
                                  double histogram_bin_width);

}  // namespace expectflow
