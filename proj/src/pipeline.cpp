#include <algorithm>
#include <atomic>
#include <mutex>
#include <thread>

#include "expectflow/errors.hpp"
#include "expectflow/pipeline.hpp"

namespace expectflow {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

struct BasinOutcome {
    std::vector<RunRecord> records;
    std::vector<BasinFailure> failures;
};

BasinOutcome process_basin(const RunConfig& config, std::size_t basin_idx) {
    BasinOutcome out;
    const std::string& path = config.basin_files[basin_idx];

    BasinRecord basin;
    try {
        LoadOptions opts;
        opts.convert_streamflow_m3s = config.convert_streamflow_m3s;
        basin = load_basin_csv(path, opts);
        make_split(basin.range(), config.split);
    } catch (const std::exception& e) {
        out.failures.push_back(BasinFailure{path, e.what()});
        return out;
    }

    const DailySeries precip = basin.precip_series();
    const DailySeries pet = basin.pet_series();
    const DailySeries obs = basin.streamflow_series();
    const DateRange full{config.split.warmup.first, config.split.evaluation.last};

    for (std::size_t mi = 0; mi < config.models.size(); ++mi) {
        for (std::size_t li = 0; li < config.loss_kinds.size(); ++li) {
            for (std::size_t vi = 0; vi < config.levels.size(); ++vi) {
                const ModelId model = config.models[mi];
                const LossKind loss = config.loss_kinds[li];
                const double level = config.levels[vi];
                try {
                    Objective objective{loss, Level(level), config.split.warmup,
                                        config.split.calibration};
                    SearchConfig search = config.search;
                    search.seed = derive_seed(config.seed, basin_idx, mi, li, vi);

                    const CalibResult calib =
                        calibrate(model, precip, pet, obs, objective, search);
                    const DailySeries sim = simulate(model, calib.params, precip.window(full),
                                                     pet.window(full));
                    const EvalOutcome eval =
                        evaluate_run(sim, obs, loss, Level(level), config.split.evaluation);

                    RunRecord rec;
                    rec.basin_id = basin.basin_id;
                    rec.model = model;
                    rec.loss_kind = loss;
                    rec.level = level;
                    rec.calib = calib;
                    rec.eval_score = eval.eval_score;
                    rec.diag_level = eval.diag_level;
                    rec.diag_degenerate = eval.diag_degenerate;
                    out.records.push_back(std::move(rec));
                } catch (const std::exception& e) {
                    out.failures.push_back(BasinFailure{
                        basin.basin_id + "/" + to_string(model) + "/" + to_string(loss) + "/" +
                            std::to_string(level),
                        e.what()});
                }
            }
        }
    }
    return out;
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t basin_idx, std::uint64_t model_idx,
                          std::uint64_t loss_idx, std::uint64_t level_idx) {
    std::uint64_t h = splitmix64(base);
    h = splitmix64(h ^ (basin_idx + 1));
    h = splitmix64(h ^ (model_idx + 1));
    h = splitmix64(h ^ (loss_idx + 1));
    h = splitmix64(h ^ (level_idx + 1));
    return h;
}

PipelineResult run_pipeline(const RunConfig& config) {
    validate(config);

    const std::size_t n_basins = config.basin_files.size();
    std::vector<BasinOutcome> outcomes(n_basins);

    unsigned n_workers = config.workers > 0 ? unsigned(config.workers)
                                            : std::max(1u, std::thread::hardware_concurrency());
    n_workers = std::min<unsigned>(n_workers, unsigned(n_basins));

    if (n_workers <= 1) {
        for (std::size_t i = 0; i < n_basins; ++i) outcomes[i] = process_basin(config, i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        pool.reserve(n_workers);
        for (unsigned w = 0; w < n_workers; ++w) {
            pool.emplace_back([&] {
                for (;;) {
                    const std::size_t i = next.fetch_add(1);
                    if (i >= n_basins) return;
                    outcomes[i] = process_basin(config, i);
                }
            });
        }
        for (auto& t : pool) t.join();
    }

    // Collect in basin order so output is independent of scheduling.
    PipelineResult result;
    for (auto& outcome : outcomes) {
        for (auto& r : outcome.records) result.records.push_back(std::move(r));
        for (auto& f : outcome.failures) result.failures.push_back(std::move(f));
    }
    if (config.strict && !result.failures.empty()) {
        throw validation_error("strict mode: " + result.failures.front().source + ": " +
                               result.failures.front().message);
    }

    result.report = aggregate_records(result.records, config.benchmark_model,
                                      config.histogram_bin_width);

    // Figure-1-style loss curves on the standard grid.
    std::vector<double> r_grid;
    for (int i = -200; i <= 200; ++i) r_grid.push_back(double(i) / 100.0);
    result.report.loss_curves = loss_curve_table(0.0, {0.05, 0.25, 0.75, 0.95}, r_grid);

    return result;
}

}  // namespace expectflow
