#pragma once

#include <string>
#include <vector>

#include "expectflow/config.hpp"
#include "expectflow/evaluation.hpp"
#include "expectflow/tail.hpp"

namespace expectflow {

inline constexpr const char* kVersion = "0.1.0";

struct BasinFailure {
    std::string source;
    std::string message;
};

struct PipelineResult {
    std::vector<RunRecord> records;
    AggregateReport report;
    std::vector<BasinFailure> failures;
};

/// Deterministic per-run seed derived from the pipeline seed and the run
/// coordinates (basin, model, loss, level index).
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t basin_idx, std::uint64_t model_idx,
                          std::uint64_t loss_idx, std::uint64_t level_idx);

/// Calibrates and evaluates every basin x model x loss x level combination
/// over a bounded worker pool, then folds the records into the report.
/// Basin failures are collected and skipped unless config.strict is set.
PipelineResult run_pipeline(const RunConfig& config);

/// Writes relative_scores.csv, medians_heatmap.csv, diag_levels_heatmap.csv,
/// histogram.csv, loss_curves.csv and manifest.json into out_dir. Reruns
/// with identical inputs produce byte-identical files.
void write_report(const PipelineResult& result, const RunConfig& config,
                  const std::string& out_dir);

/// Writes tail_report.csv and gp_histogram.csv for the tail experiment.
void write_tail_report(const TailReport& report, const TruncatedHistogram& histogram,
                       const std::string& out_dir);

}  // namespace expectflow
