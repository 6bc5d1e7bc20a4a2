#pragma once

#include <string>
#include <vector>

#include "expectflow/basin.hpp"
#include "expectflow/calibration.hpp"
#include "expectflow/evaluation.hpp"

namespace expectflow {

/// Full pipeline configuration, normally loaded from a JSON document
/// (comments allowed; see config/pipeline.json for the annotated template).
struct RunConfig {
    std::vector<std::string> basin_files;
    std::vector<ModelId> models = {ModelId::Gr4j, ModelId::Lr2};
    ModelId benchmark_model = ModelId::Lr2;
    std::vector<LossKind> loss_kinds = {LossKind::Expectile};
    std::vector<double> levels = {0.5, 0.9, 0.95, 0.975};
    SplitSpec split;
    SearchConfig search;
    std::uint64_t seed = 42;
    double histogram_bin_width = 0.02;
    bool convert_streamflow_m3s = false;
    bool strict = false;
    int workers = 0;  // 0 = hardware concurrency
    std::string out_dir = "out";
};

void validate(const RunConfig& config);

RunConfig load_run_config(const std::string& path);

}  // namespace expectflow
