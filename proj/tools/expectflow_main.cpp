// Command-line front end: tail-demo, pet, simulate, calibrate, evaluate,
// run, loss-curves, synth. Exit codes: 0 success, 1 validation failure,
// 2 I/O failure.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "expectflow/errors.hpp"
#include "expectflow/pipeline.hpp"

namespace ef = expectflow;

namespace {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void ensure_dir(const std::string& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) {
        throw ef::io_error("cannot create output directory '" + dir + "': " + ec.message());
    }
}

std::ofstream open_out(const std::string& dir, const std::string& name) {
    ensure_dir(dir);
    std::ofstream out(dir + "/" + name, std::ios::binary);
    if (!out) {
        throw ef::io_error("cannot write '" + dir + "/" + name + "'");
    }
    return out;
}

ef::DateRange range_from(const std::vector<std::string>& pair, const char* what) {
    if (pair.size() != 2) {
        throw ef::validation_error(std::string(what) + " needs two dates (start end)");
    }
    return ef::make_range(ef::parse_date(pair[0]), ef::parse_date(pair[1]));
}

ef::ModelParams parse_params(ef::ModelId model, const std::vector<double>& values) {
    return ef::params_from_natural(model, values);
}

void write_series_csv(const ef::DailySeries& series, const std::string& dir,
                      const std::string& name, const char* column) {
    auto out = open_out(dir, name);
    out << "date," << column << "\n";
    for (long i = 0; i < series.size(); ++i) {
        out << ef::format_date(series.date_at(i)) << ',' << fmt17(series.values[size_t(i)])
            << '\n';
    }
}

int add_tail_demo(CLI::App& app) {
    auto* cmd = app.add_subcommand("tail-demo", "Generalized-Pareto tail sensitivity experiment");
    auto n = std::make_shared<std::size_t>(1000000);
    auto level = std::make_shared<double>(0.975);
    auto shift = std::make_shared<double>(0.1);
    auto seed = std::make_shared<std::uint64_t>(42);
    auto mu = std::make_shared<double>(0.0);
    auto sigma = std::make_shared<double>(1.0);
    auto xi = std::make_shared<double>(0.2);
    auto out_dir = std::make_shared<std::string>("out");
    cmd->add_option("--n", *n, "sample size (paper scale: 10000000)");
    cmd->add_option("--level", *level, "quantile/expectile level");
    cmd->add_option("--shift", *shift, "amount added above the sample quantile");
    cmd->add_option("--seed", *seed, "RNG seed");
    cmd->add_option("--mu", *mu, "GP location");
    cmd->add_option("--sigma", *sigma, "GP scale");
    cmd->add_option("--xi", *xi, "GP shape");
    cmd->add_option("--out", *out_dir, "output directory");
    cmd->callback([=] {
        const ef::GpParams gp{*mu, *sigma, *xi};
        const ef::TailReport rep =
            ef::run_tail_experiment(gp, *n, ef::Level(*level), *shift, *seed);
        const auto sample = ef::gp_sample(gp, *n, *seed);
        const auto hist = ef::gp_histogram(sample, 0.1, 0.0, 8.0);
        ef::write_tail_report(rep, hist, *out_dir);
        std::printf("q_before  %.4f\ne_before  %.4f\nq_after   %.4f\ne_after   %.4f\n",
                    rep.q_before, rep.e_before, rep.q_after, rep.e_after);
        std::printf("rp_before %.2f\nrp_after  %.2f\n", rep.rp_before, rep.rp_after);
        for (const auto& [lv, d] : rep.lower_level_quantile_deltas) {
            std::printf("quantile delta @%.2f  %.6g\n", lv, d);
        }
        for (const auto& [lv, d] : rep.all_level_expectile_deltas) {
            std::printf("expectile delta @%.2f  %.6g\n", lv, d);
        }
        std::printf("wrote %s/tail_report.csv and gp_histogram.csv\n", out_dir->c_str());
    });
    return 0;
}

int add_pet(CLI::App& app) {
    auto* cmd = app.add_subcommand("pet", "Compute Oudin PET for a basin file");
    auto input = std::make_shared<std::string>();
    auto out_dir = std::make_shared<std::string>("out");
    auto lat = std::make_shared<double>();
    cmd->add_option("--input", *input, "basin CSV")->required();
    cmd->add_option("--out", *out_dir, "output directory");
    auto* lat_opt = cmd->add_option("--latitude-deg", *lat, "override sidecar latitude");
    cmd->callback([=] {
        ef::LoadOptions opts;
        if (lat_opt->count() > 0) opts.latitude_deg = *lat;
        const ef::BasinRecord basin = ef::load_basin_csv(*input, opts);
        write_series_csv(basin.pet_series(), *out_dir, "pet.csv", "pet_mm");
        std::printf("wrote %s/pet.csv (%ld days)\n", out_dir->c_str(), basin.size());
    });
    return 0;
}

int add_simulate(CLI::App& app) {
    auto* cmd = app.add_subcommand("simulate", "Run a model over a basin's forcings");
    auto input = std::make_shared<std::string>();
    auto model_name = std::make_shared<std::string>("gr4j");
    auto params = std::make_shared<std::vector<double>>();
    auto out_dir = std::make_shared<std::string>("out");
    cmd->add_option("--input", *input, "basin CSV")->required();
    cmd->add_option("--model", *model_name, "gr4j or lr2");
    cmd->add_option("--params", *params, "comma-separated parameters in natural units")
        ->required()
        ->delimiter(',');
    cmd->add_option("--out", *out_dir, "output directory");
    cmd->callback([=] {
        const ef::ModelId model = ef::model_id_from_string(*model_name);
        const ef::BasinRecord basin = ef::load_basin_csv(*input);
        const ef::DailySeries sim = ef::simulate(model, parse_params(model, *params),
                                                 basin.precip_series(), basin.pet_series());
        write_series_csv(sim, *out_dir, "simulation.csv", "q_mm");
        std::printf("wrote %s/simulation.csv (%ld days)\n", out_dir->c_str(), sim.size());
    });
    return 0;
}

int add_calibrate(CLI::App& app) {
    auto* cmd = app.add_subcommand("calibrate", "Calibrate one model against one loss/level");
    auto input = std::make_shared<std::string>();
    auto model_name = std::make_shared<std::string>("gr4j");
    auto loss_name = std::make_shared<std::string>("expectile");
    auto level = std::make_shared<double>(0.5);
    auto warmup = std::make_shared<std::vector<std::string>>();
    auto calib = std::make_shared<std::vector<std::string>>();
    auto seed = std::make_shared<std::uint64_t>(42);
    auto out_dir = std::make_shared<std::string>("out");
    cmd->add_option("--input", *input, "basin CSV")->required();
    cmd->add_option("--model", *model_name, "gr4j or lr2");
    cmd->add_option("--loss", *loss_name, "expectile or quantile");
    cmd->add_option("--level", *level, "loss level in (0,1)");
    cmd->add_option("--warmup", *warmup, "warm-up start end")->expected(2)->required();
    cmd->add_option("--calib", *calib, "calibration start end")->expected(2)->required();
    cmd->add_option("--seed", *seed, "search seed");
    cmd->add_option("--out", *out_dir, "output directory");
    cmd->callback([=] {
        const ef::ModelId model = ef::model_id_from_string(*model_name);
        const ef::BasinRecord basin = ef::load_basin_csv(*input);
        ef::Objective objective{ef::loss_kind_from_string(*loss_name), ef::Level(*level),
                                range_from(*warmup, "--warmup"), range_from(*calib, "--calib")};
        ef::SearchConfig search;
        search.seed = *seed;
        const ef::CalibResult result =
            ef::calibrate(model, basin.precip_series(), basin.pet_series(),
                          basin.streamflow_series(), objective, search);

        nlohmann::json j;
        j["model"] = *model_name;
        j["loss"] = *loss_name;
        j["level"] = *level;
        j["seed"] = result.seed;
        j["objective_value"] = result.objective_value;
        j["n_evals"] = result.n_evals;
        const auto& axes = ef::param_axes(model);
        const std::vector<double> natural = ef::natural_from_params(result.params);
        for (size_t i = 0; i < axes.size(); ++i) j["params"][axes[i].name] = natural[i];
        nlohmann::json trace = nlohmann::json::array();
        for (const auto& [idx, value] : result.trace) trace.push_back({idx, value});
        j["trace"] = std::move(trace);
        auto out = open_out(*out_dir, "calibration.json");
        out << j.dump(2) << '\n';
        std::printf("objective %.8g after %ld evaluations; wrote %s/calibration.json\n",
                    result.objective_value, result.n_evals, out_dir->c_str());
    });
    return 0;
}

int add_evaluate(CLI::App& app) {
    auto* cmd = app.add_subcommand("evaluate", "Score a simulation CSV against observations");
    auto obs_path = std::make_shared<std::string>();
    auto sim_path = std::make_shared<std::string>();
    auto loss_name = std::make_shared<std::string>("expectile");
    auto level = std::make_shared<double>(0.5);
    auto range = std::make_shared<std::vector<std::string>>();
    auto out_dir = std::make_shared<std::string>("out");
    cmd->add_option("--obs", *obs_path, "basin CSV with observed q_mm")->required();
    cmd->add_option("--sim", *sim_path, "simulation CSV (date,q_mm)")->required();
    cmd->add_option("--loss", *loss_name, "expectile or quantile");
    cmd->add_option("--level", *level, "loss level in (0,1)");
    cmd->add_option("--range", *range, "evaluation start end")->expected(2)->required();
    cmd->add_option("--out", *out_dir, "output directory");
    cmd->callback([=] {
        const ef::BasinRecord basin = ef::load_basin_csv(*obs_path);

        // Simulation files carry two columns: date,q_mm.
        std::ifstream in(*sim_path);
        if (!in) throw ef::io_error("cannot open '" + *sim_path + "'");
        std::string line;
        if (!std::getline(in, line)) throw ef::io_error(*sim_path + ": empty file");
        ef::DailySeries sim;
        sim.unit = ef::Unit::MmPerDay;
        bool first = true;
        long line_no = 1;
        while (std::getline(in, line)) {
            ++line_no;
            if (line.empty()) continue;
            const auto comma = line.find(',');
            if (comma == std::string::npos) {
                throw ef::io_error(*sim_path + ":" + std::to_string(line_no) + ": expected 2 columns");
            }
            const ef::Date d = ef::parse_date(line.substr(0, comma));
            if (first) {
                sim.start = d;
                first = false;
            } else if (d != sim.date_at(sim.size())) {
                throw ef::validation_error(*sim_path + ": contiguity error at line " +
                                           std::to_string(line_no));
            }
            try {
                sim.values.push_back(std::stod(line.substr(comma + 1)));
            } catch (const std::exception&) {
                throw ef::io_error(*sim_path + ":" + std::to_string(line_no) +
                                   ": cannot parse value");
            }
        }

        const ef::DateRange eval_range = range_from(*range, "--range");
        const ef::EvalOutcome outcome =
            ef::evaluate_run(sim, basin.streamflow_series(), ef::loss_kind_from_string(*loss_name),
                             ef::Level(*level), eval_range);
        auto out = open_out(*out_dir, "evaluation.csv");
        out << "loss,level,eval_score,diag_level,diag_degenerate\n";
        out << *loss_name << ',' << *level << ',' << fmt17(outcome.eval_score) << ','
            << fmt17(outcome.diag_level) << ',' << (outcome.diag_degenerate ? 1 : 0) << '\n';
        std::printf("eval_score %.8g  diag_level %.4f\n", outcome.eval_score, outcome.diag_level);
    });
    return 0;
}

int add_run(CLI::App& app) {
    auto* cmd = app.add_subcommand("run", "Full multi-basin pipeline from a config file");
    auto config_path = std::make_shared<std::string>();
    auto strict = std::make_shared<bool>(false);
    auto out_dir = std::make_shared<std::string>();
    cmd->add_option("--config", *config_path, "JSON config (comments allowed)")->required();
    cmd->add_flag("--strict", *strict, "fail on the first basin error");
    auto* out_opt = cmd->add_option("--out", *out_dir, "override config out_dir");
    cmd->callback([=] {
        ef::RunConfig config = ef::load_run_config(*config_path);
        if (*strict) config.strict = true;
        if (out_opt->count() > 0) config.out_dir = *out_dir;
        const ef::PipelineResult result = ef::run_pipeline(config);
        ef::write_report(result, config, config.out_dir);
        std::printf("%zu runs, %zu failures; report in %s\n", result.records.size(),
                    result.failures.size(), config.out_dir.c_str());
        for (const ef::BasinFailure& f : result.failures) {
            std::fprintf(stderr, "failed: %s: %s\n", f.source.c_str(), f.message.c_str());
        }
        if (!result.failures.empty()) {
            throw ef::validation_error("pipeline finished with failures");
        }
    });
    return 0;
}

int add_loss_curves(CLI::App& app) {
    auto* cmd = app.add_subcommand("loss-curves", "Tabulate quantile/expectile loss curves");
    auto x = std::make_shared<double>(0.0);
    auto levels = std::make_shared<std::vector<double>>(
        std::vector<double>{0.05, 0.25, 0.75, 0.95});
    auto r_min = std::make_shared<double>(-2.0);
    auto r_max = std::make_shared<double>(2.0);
    auto step = std::make_shared<double>(0.01);
    auto out_dir = std::make_shared<std::string>("out");
    cmd->add_option("--x", *x, "materialized value");
    cmd->add_option("--levels", *levels, "comma-separated levels in (0,1)")->delimiter(',');
    cmd->add_option("--rmin", *r_min, "grid start");
    cmd->add_option("--rmax", *r_max, "grid end");
    cmd->add_option("--step", *step, "grid step");
    cmd->add_option("--out", *out_dir, "output directory");
    cmd->callback([=] {
        if (!(*step > 0.0) || !(*r_max >= *r_min)) {
            throw ef::validation_error("loss-curves: need step > 0 and rmax >= rmin");
        }
        std::vector<double> grid;
        for (long i = 0;; ++i) {
            const double r = *r_min + double(i) * *step;
            if (r > *r_max + 1e-12) break;
            grid.push_back(r);
        }
        const auto rows = ef::loss_curve_table(*x, *levels, grid);
        auto out = open_out(*out_dir, "loss_curves.csv");
        out << "kind,level,r,loss\n";
        for (const auto& row : rows) {
            out << ef::to_string(row.kind) << ',' << row.level << ',' << fmt17(row.r) << ','
                << fmt17(row.loss) << '\n';
        }
        std::printf("wrote %s/loss_curves.csv (%zu rows)\n", out_dir->c_str(), rows.size());
    });
    return 0;
}

int add_synth(CLI::App& app) {
    auto* cmd = app.add_subcommand("synth", "Emit a deterministic synthetic basin");
    auto seed = std::make_shared<std::uint64_t>(1);
    auto years = std::make_shared<int>(34);
    auto noise = std::make_shared<double>(0.2);
    auto out_dir = std::make_shared<std::string>("out");
    cmd->add_option("--seed", *seed, "generator seed");
    cmd->add_option("--years", *years, "record length in calendar years from 1980");
    cmd->add_option("--noise", *noise, "multiplicative noise amplitude");
    cmd->add_option("--out", *out_dir, "output directory");
    cmd->callback([=] {
        const ef::BasinRecord basin = ef::synth_basin(*seed, *years, *noise);
        ensure_dir(*out_dir);
        const std::string path = *out_dir + "/" + basin.basin_id + ".csv";
        ef::write_basin_csv(basin, path);
        std::printf("wrote %s (%ld days)\n", path.c_str(), basin.size());
    });
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Expectile- and quantile-loss calibration toolkit for daily rainfall-runoff models"};
    app.require_subcommand(1);
    add_tail_demo(app);
    add_pet(app);
    add_simulate(app);
    add_calibrate(app);
    add_evaluate(app);
    add_run(app);
    add_loss_curves(app);
    add_synth(app);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const ef::io_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
