#include <cstdio>
#include <filesystem>
#include <fstream>

#include <nlohmann/json.hpp>

#include "expectflow/errors.hpp"
#include "expectflow/pipeline.hpp"

namespace expectflow {

namespace {

// %.17g round-trips doubles exactly; %g keeps level labels readable.
std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string fmt_level(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%g", v);
    return buf;
}

std::ofstream open_out(const std::string& dir, const std::string& name) {
    std::ofstream out(dir + "/" + name, std::ios::binary);
    if (!out) {
        throw io_error("cannot write '" + dir + "/" + name + "'");
    }
    return out;
}

void ensure_dir(const std::string& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) {
        throw io_error("cannot create output directory '" + dir + "': " + ec.message());
    }
}

nlohmann::json config_to_json(const RunConfig& c) {
    nlohmann::json j;
    j["basins"] = c.basin_files;
    j["models"] = nlohmann::json::array();
    for (ModelId m : c.models) j["models"].push_back(to_string(m));
    j["benchmark_model"] = to_string(c.benchmark_model);
    j["loss_kinds"] = nlohmann::json::array();
    for (LossKind k : c.loss_kinds) j["loss_kinds"].push_back(to_string(k));
    j["levels"] = c.levels;
    j["split"] = {
        {"warmup", {format_date(c.split.warmup.first), format_date(c.split.warmup.last)}},
        {"calibration",
         {format_date(c.split.calibration.first), format_date(c.split.calibration.last)}},
        {"evaluation",
         {format_date(c.split.evaluation.first), format_date(c.split.evaluation.last)}}};
    j["search"] = {{"screen_count", c.search.screen_count},
                   {"initial_step", c.search.initial_step},
                   {"step_shrink", c.search.step_shrink},
                   {"min_step", c.search.min_step},
                   {"max_evals", c.search.max_evals}};
    j["seed"] = c.seed;
    j["histogram_bin_width"] = c.histogram_bin_width;
    j["convert_streamflow_m3s"] = c.convert_streamflow_m3s;
    j["workers"] = c.workers;
    j["out_dir"] = c.out_dir;
    return j;
}

}  // namespace

void write_report(const PipelineResult& result, const RunConfig& config,
                  const std::string& out_dir) {
    ensure_dir(out_dir);

    {
        auto out = open_out(out_dir, "relative_scores.csv");
        out << "basin_id,model,loss,level,eval_score,bench_score,relative_score\n";
        for (const RelativeScoreRow& row : result.report.relative_scores) {
            out << row.basin_id << ',' << to_string(row.model) << ',' << to_string(row.loss_kind)
                << ',' << fmt_level(row.level) << ',' << fmt17(row.eval_score) << ','
                << fmt17(row.bench_score) << ','
                << (row.rel_score ? fmt17(*row.rel_score) : std::string()) << '\n';
        }
    }
    {
        auto out = open_out(out_dir, "medians_heatmap.csv");
        out << "model,loss,level,median_relative_score,n\n";
        for (const GroupedMedian& m : result.report.score_medians) {
            out << m.model << ',' << m.loss << ',' << fmt_level(m.level) << ','
                << fmt17(m.median) << ',' << m.count << '\n';
        }
    }
    {
        auto out = open_out(out_dir, "diag_levels_heatmap.csv");
        out << "model,loss,level,median_diag_level,n\n";
        for (const GroupedMedian& m : result.report.diag_medians) {
            out << m.model << ',' << m.loss << ',' << fmt_level(m.level) << ','
                << fmt17(m.median) << ',' << m.count << '\n';
        }
    }
    {
        auto out = open_out(out_dir, "histogram.csv");
        out << "group,bin_lo,bin_hi,count\n";
        for (const auto& [group, bins] : result.report.score_histograms) {
            for (const HistogramRow& b : bins) {
                out << group << ',' << fmt17(b.lo) << ',' << fmt17(b.hi) << ',' << b.count << '\n';
            }
        }
    }
    {
        auto out = open_out(out_dir, "loss_curves.csv");
        out << "kind,level,r,loss\n";
        for (const LossCurveRow& row : result.report.loss_curves) {
            out << to_string(row.kind) << ',' << fmt_level(row.level) << ',' << fmt17(row.r)
                << ',' << fmt17(row.loss) << '\n';
        }
    }

    nlohmann::json manifest;
    manifest["version"] = kVersion;
    manifest["config"] = config_to_json(config);
    manifest["undefined_relative_scores"] = result.report.undefined_scores;
    manifest["warnings"] = result.report.warnings;
    manifest["failures"] = nlohmann::json::array();
    for (const BasinFailure& f : result.failures) {
        manifest["failures"].push_back({{"source", f.source}, {"message", f.message}});
    }
    manifest["runs"] = nlohmann::json::array();
    for (const RunRecord& r : result.records) {
        nlohmann::json run;
        run["basin_id"] = r.basin_id;
        run["model"] = to_string(r.model);
        run["loss"] = to_string(r.loss_kind);
        run["level"] = r.level;
        run["seed"] = r.calib.seed;
        nlohmann::json params;
        const auto& axes = param_axes(r.model);
        const std::vector<double> natural = natural_from_params(r.calib.params);
        for (size_t i = 0; i < axes.size(); ++i) params[axes[i].name] = natural[i];
        run["params"] = params;
        run["objective_value"] = r.calib.objective_value;
        run["n_evals"] = r.calib.n_evals;
        run["eval_score"] = r.eval_score;
        run["diag_level"] = r.diag_level;
        run["diag_degenerate"] = r.diag_degenerate;
        nlohmann::json trace = nlohmann::json::array();
        for (const auto& [idx, value] : r.calib.trace) trace.push_back({idx, value});
        run["trace"] = std::move(trace);
        manifest["runs"].push_back(std::move(run));
    }
    auto out = open_out(out_dir, "manifest.json");
    out << manifest.dump(2) << '\n';
}

void write_tail_report(const TailReport& report, const TruncatedHistogram& histogram,
                       const std::string& out_dir) {
    ensure_dir(out_dir);
    {
        auto out = open_out(out_dir, "tail_report.csv");
        out << "field,level,value\n";
        const double lv = report.level.value();
        out << "q_before," << fmt_level(lv) << ',' << fmt17(report.q_before) << '\n';
        out << "e_before," << fmt_level(lv) << ',' << fmt17(report.e_before) << '\n';
        out << "q_after," << fmt_level(lv) << ',' << fmt17(report.q_after) << '\n';
        out << "e_after," << fmt_level(lv) << ',' << fmt17(report.e_after) << '\n';
        out << "rp_before," << fmt_level(lv) << ',' << fmt17(report.rp_before) << '\n';
        out << "rp_after," << fmt_level(lv) << ',' << fmt17(report.rp_after) << '\n';
        for (const auto& [level, delta] : report.lower_level_quantile_deltas) {
            out << "quantile_delta," << fmt_level(level) << ',' << fmt17(delta) << '\n';
        }
        for (const auto& [level, delta] : report.all_level_expectile_deltas) {
            out << "expectile_delta," << fmt_level(level) << ',' << fmt17(delta) << '\n';
        }
        out << "n,," << report.n << '\n';
        out << "seed,," << report.seed << '\n';
        out << "shift," << fmt_level(lv) << ',' << fmt17(report.shift) << '\n';
        out << "gp_mu,," << fmt17(report.gp.mu) << '\n';
        out << "gp_sigma,," << fmt17(report.gp.sigma) << '\n';
        out << "gp_xi,," << fmt17(report.gp.xi) << '\n';
        out << "generator,," << report.generator << '\n';
    }
    {
        auto out = open_out(out_dir, "gp_histogram.csv");
        out << "bin_lo,bin_hi,count\n";
        for (const HistogramBin& b : histogram.bins) {
            out << fmt17(b.lo) << ',' << fmt17(b.hi) << ',' << b.count << '\n';
        }
        out << "dropped,," << histogram.dropped << '\n';
    }
}

}  // namespace expectflow
