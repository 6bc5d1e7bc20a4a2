#include <algorithm>
#include <fstream>

#include <nlohmann/json.hpp>

#include "expectflow/config.hpp"
#include "expectflow/errors.hpp"

namespace expectflow {

namespace {

DateRange range_from_json(const nlohmann::json& j, const char* name) {
    if (!j.is_array() || j.size() != 2) {
        throw validation_error(std::string("config: split.") + name +
                               " must be [\"YYYY-MM-DD\", \"YYYY-MM-DD\"]");
    }
    return make_range(parse_date(j[0].get<std::string>()), parse_date(j[1].get<std::string>()));
}

}  // namespace

void validate(const RunConfig& config) {
    if (config.basin_files.empty()) {
        throw validation_error("config: no basin files listed");
    }
    if (config.models.empty()) {
        throw validation_error("config: no models listed");
    }
    if (std::find(config.models.begin(), config.models.end(), config.benchmark_model) ==
        config.models.end()) {
        throw validation_error("config: benchmark model " + to_string(config.benchmark_model) +
                               " is not among the configured models");
    }
    if (config.loss_kinds.empty() || config.levels.empty()) {
        throw validation_error("config: need at least one loss kind and one level");
    }
    for (double level : config.levels) {
        if (!(level > 0.0 && level < 1.0)) {
            throw validation_error("config: level " + std::to_string(level) +
                                   " outside the open interval (0,1)");
        }
    }
    if (!(config.histogram_bin_width > 0.0)) {
        throw validation_error("config: histogram_bin_width must be positive");
    }
    if (config.workers < 0) {
        throw validation_error("config: workers must be >= 0");
    }
    validate(config.search);
    // Split consistency is checked per basin against its record; ordering here.
    SplitSpec s = config.split;
    make_split(DateRange{s.warmup.first, s.evaluation.last}, s);
}

RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw io_error("cannot open config '" + path + "'");
    }
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in, nullptr, true, /*ignore_comments=*/true);
    } catch (const nlohmann::json::exception& e) {
        throw io_error(path + ": " + e.what());
    }

    RunConfig cfg;
    try {
        cfg.basin_files = j.at("basins").get<std::vector<std::string>>();

        if (j.contains("models")) {
            cfg.models.clear();
            for (const auto& name : j.at("models")) {
                cfg.models.push_back(model_id_from_string(name.get<std::string>()));
            }
        }
        if (j.contains("benchmark_model")) {
            cfg.benchmark_model = model_id_from_string(j.at("benchmark_model").get<std::string>());
        }
        if (j.contains("loss_kinds")) {
            cfg.loss_kinds.clear();
            for (const auto& name : j.at("loss_kinds")) {
                cfg.loss_kinds.push_back(loss_kind_from_string(name.get<std::string>()));
            }
        }
        if (j.contains("levels")) cfg.levels = j.at("levels").get<std::vector<double>>();

        const auto& split = j.at("split");
        cfg.split.warmup = range_from_json(split.at("warmup"), "warmup");
        cfg.split.calibration = range_from_json(split.at("calibration"), "calibration");
        cfg.split.evaluation = range_from_json(split.at("evaluation"), "evaluation");

        if (j.contains("search")) {
            const auto& s = j.at("search");
            if (s.contains("screen_count")) cfg.search.screen_count = s.at("screen_count");
            if (s.contains("initial_step")) cfg.search.initial_step = s.at("initial_step");
            if (s.contains("step_shrink")) cfg.search.step_shrink = s.at("step_shrink");
            if (s.contains("min_step")) cfg.search.min_step = s.at("min_step");
            if (s.contains("max_evals")) cfg.search.max_evals = s.at("max_evals");
        }
        if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
        if (j.contains("histogram_bin_width")) {
            cfg.histogram_bin_width = j.at("histogram_bin_width").get<double>();
        }
        if (j.contains("convert_streamflow_m3s")) {
            cfg.convert_streamflow_m3s = j.at("convert_streamflow_m3s").get<bool>();
        }
        if (j.contains("workers")) cfg.workers = j.at("workers").get<int>();
        if (j.contains("out_dir")) cfg.out_dir = j.at("out_dir").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
        throw validation_error(path + ": " + e.what());
    }
    validate(cfg);
    return cfg;
}

}  // namespace expectflow
