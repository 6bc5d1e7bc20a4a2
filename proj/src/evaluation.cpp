#include "expectflow/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <tuple>

#include "expectflow/errors.hpp"

namespace expectflow {

SplitSpec make_split(const DateRange& record, const SplitSpec& spec) {
    const auto adjacent = [](const DateRange& a, const DateRange& b, const char* what) {
        if (b.first <= a.last) {
            throw validation_error(std::string("split error: ") + what + " overlaps or precedes " +
                                   "its predecessor (" + format_date(b.first) +
                                   " <= " + format_date(a.last) + ")");
        }
        if ((b.first - a.last).count() != 1) {
            throw validation_error(std::string("split error: gap before ") + what + " (" +
                                   format_date(a.last) + " -> " + format_date(b.first) + ")");
        }
    };
    adjacent(spec.warmup, spec.calibration, "calibration");
    adjacent(spec.calibration, spec.evaluation, "evaluation");
    for (const auto& [range, name] :
         {std::pair{spec.warmup, "warm-up"}, std::pair{spec.calibration, "calibration"},
          std::pair{spec.evaluation, "evaluation"}}) {
        if (!record.contains(range)) {
            throw validation_error(std::string("coverage error: ") + name + " interval [" +
                                   format_date(range.first) + ", " + format_date(range.last) +
                                   "] exceeds the record [" + format_date(record.first) + ", " +
                                   format_date(record.last) + "]");
        }
    }
    return spec;
}

EvalOutcome evaluate_run(const DailySeries& simulated, const DailySeries& observed,
                         LossKind loss_kind, Level level, const DateRange& eval_range) {
    const auto sim = simulated.slice(eval_range);
    const auto obs = observed.slice(eval_range);
    EvalOutcome out;
    out.eval_score = mean_loss(obs, sim, loss_kind, level);
    out.diag_level = prediction_expectile_level(obs, sim);
    out.diag_degenerate = true;
    for (size_t i = 0; i < obs.size(); ++i) {
        if (obs[i] != sim[i]) {
            out.diag_degenerate = false;
            break;
        }
    }
    return out;
}

double relative_score(double score_bench, double score_model) {
    if (!(score_bench > 0.0)) {
        throw std::domain_error("relative score needs a positive benchmark score");
    }
    return (score_bench - score_model) / score_bench;
}

double exact_median(std::vector<double> values) {
    if (values.empty()) {
        throw std::invalid_argument("median of empty set");
    }
    std::sort(values.begin(), values.end());
    const size_t n = values.size();
    if (n % 2 == 1) return values[n / 2];
    return 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

std::vector<HistogramRow> histogram_truncated(const std::vector<double>& values, double bin_width,
                                              double lo, double hi) {
    if (!(bin_width > 0.0) || !(hi > lo)) {
        throw std::invalid_argument("histogram needs positive bin width and hi > lo");
    }
    const auto nbins = static_cast<size_t>(std::ceil((hi - lo) / bin_width - 1e-9));
    std::vector<HistogramRow> bins;
    bins.reserve(nbins);
    for (size_t i = 0; i < nbins; ++i) {
        bins.push_back(HistogramRow{lo + double(i) * bin_width, lo + double(i + 1) * bin_width, 0});
    }
    for (double v : values) {
        auto idx = static_cast<long>(std::floor((std::clamp(v, lo, hi) - lo) / bin_width));
        idx = std::max(0L, std::min(long(nbins) - 1, idx));
        ++bins[static_cast<size_t>(idx)].count;
    }
    return bins;
}

std::vector<LossCurveRow> loss_curve_table(double x, const std::vector<double>& levels,
                                           const std::vector<double>& r_grid) {
    if (r_grid.empty()) {
        throw std::invalid_argument("loss curve grid must be non-empty");
    }
    std::vector<LossCurveRow> rows;
    rows.reserve(2 * levels.size() * r_grid.size());
    for (LossKind kind : {LossKind::Quantile, LossKind::Expectile}) {
        for (double lv : levels) {
            const Level level(lv);
            for (double r : r_grid) {
                rows.push_back(LossCurveRow{kind, lv, r, pointwise_loss(r, x, kind, level)});
            }
        }
    }
    return rows;
}

AggregateReport aggregate_records(const std::vector<RunRecord>& records, ModelId benchmark,
                                  double histogram_bin_width) {
    AggregateReport report;

    // Benchmark score per (basin, loss, level).
    using Key = std::tuple<std::string, std::string, double>;
    std::map<Key, double> bench_scores;
    for (const RunRecord& r : records) {
        if (r.model == benchmark) {
            bench_scores[{r.basin_id, to_string(r.loss_kind), r.level}] = r.eval_score;
        }
    }

    std::map<std::tuple<std::string, std::string, double>, std::vector<double>> rel_groups;
    std::map<std::tuple<std::string, std::string, double>, std::vector<double>> diag_groups;
    std::map<std::string, std::vector<double>> model_rel;  // pooled over levels, per model/loss

    for (const RunRecord& r : records) {
        const std::string model_name = to_string(r.model);
        const std::string loss_name = to_string(r.loss_kind);
        diag_groups[{model_name, loss_name, r.level}].push_back(r.diag_level);

        RelativeScoreRow row{r.basin_id, r.model, r.loss_kind, r.level, r.eval_score, 0.0, {}};
        const auto it = bench_scores.find({r.basin_id, loss_name, r.level});
        if (it == bench_scores.end()) {
            report.warnings.push_back("no benchmark run for basin " + r.basin_id + " loss " +
                                      loss_name + " level " + std::to_string(r.level));
        } else {
            row.bench_score = it->second;
            if (it->second > 0.0) {
                row.rel_score = relative_score(it->second, r.eval_score);
                rel_groups[{model_name, loss_name, r.level}].push_back(*row.rel_score);
                model_rel[model_name + "/" + loss_name].push_back(*row.rel_score);
            } else {
                ++report.undefined_scores;
            }
        }
        report.relative_scores.push_back(std::move(row));
    }

    for (const auto& [key, values] : rel_groups) {
        report.score_medians.push_back(GroupedMedian{std::get<0>(key), std::get<1>(key),
                                                     std::get<2>(key), exact_median(values),
                                                     values.size()});
    }
    for (const auto& [key, values] : diag_groups) {
        report.diag_medians.push_back(GroupedMedian{std::get<0>(key), std::get<1>(key),
                                                    std::get<2>(key), exact_median(values),
                                                    values.size()});
        if (rel_groups.find(key) == rel_groups.end()) {
            report.warnings.push_back("median omitted for " + std::get<0>(key) + "/" +
                                      std::get<1>(key) + " at level " +
                                      std::to_string(std::get<2>(key)) +
                                      ": no defined relative scores");
        }
    }
    for (const auto& [key, values] : model_rel) {
        report.score_histograms[key] = histogram_truncated(values, histogram_bin_width);
    }
    return report;
}

}  // namespace expectflow
