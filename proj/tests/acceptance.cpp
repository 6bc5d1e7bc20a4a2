// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Tolerances are pinned in code next to each check.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "expectflow/config.hpp"
#include "expectflow/pipeline.hpp"

using namespace expectflow;

namespace {

struct Checker {
    std::vector<std::string> failures;

    void expect(bool ok, const std::string& what) {
        if (!ok) failures.push_back(what);
    }
    void expect_near(double actual, double target, double tol, const std::string& what) {
        if (!(std::abs(actual - target) <= tol)) {
            char buf[160];
            std::snprintf(buf, sizeof(buf), "%s: got %.10g, want %.10g +/- %.3g", what.c_str(),
                          actual, target, tol);
            failures.push_back(buf);
        }
    }
};

int g_failed = 0;

void run_criterion(int id, const std::string& name, const std::function<void(Checker&)>& body) {
    Checker c;
    try {
        body(c);
    } catch (const std::exception& e) {
        c.failures.push_back(std::string("exception: ") + e.what());
    }
    if (c.failures.empty()) {
        std::printf("[PASS] %2d. %s\n", id, name.c_str());
    } else {
        ++g_failed;
        std::printf("[FAIL] %2d. %s\n", id, name.c_str());
        for (const auto& f : c.failures) std::printf("         - %s\n", f.c_str());
    }
    std::fflush(stdout);
}

double u53(std::mt19937_64& rng) {
    return double(rng() >> 11) * 0x1.0p-53;
}

double variance(std::span<const double> v) {
    const double mean = std::accumulate(v.begin(), v.end(), 0.0) / double(v.size());
    double acc = 0.0;
    for (double x : v) acc += (x - mean) * (x - mean);
    return acc / double(v.size());
}

double mean_of(std::span<const double> v) {
    return std::accumulate(v.begin(), v.end(), 0.0) / double(v.size());
}

SplitSpec paper_split() {
    return SplitSpec{DateRange{make_date(1980, 1, 1), make_date(1981, 12, 31)},
                     DateRange{make_date(1982, 1, 1), make_date(1997, 12, 31)},
                     DateRange{make_date(1998, 1, 1), make_date(2013, 12, 31)}};
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

void criterion_1_tail_experiment(Checker& c) {
    const auto t0 = std::chrono::steady_clock::now();
    const TailReport rep =
        run_tail_experiment(GpParams{0.0, 1.0, 0.2}, 10000000, Level(0.975), 0.1, 42);
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    c.expect_near(rep.q_before, 5.46, 0.02, "q_before");
    c.expect_near(rep.e_before, 4.66, 0.02, "e_before");
    c.expect(rep.q_after == rep.q_before, "q_after must equal q_before exactly");
    c.expect_near(rep.e_after, 4.70, 0.02, "e_after");
    c.expect(rep.rp_before == 1.0 / (1.0 - 0.975) && std::abs(rep.rp_before - 40.0) < 1e-12,
             "rp_before must be 40 (exact 1/(1-level))");
    c.expect(rep.rp_after >= 38.0 && rep.rp_after < 40.0, "rp_after must lie in [38, 40)");
    for (const auto& [lv, d] : rep.lower_level_quantile_deltas) {
        c.expect(d == 0.0, "quantile delta at level " + std::to_string(lv) + " must be exactly 0");
    }
    for (const auto& [lv, d] : rep.all_level_expectile_deltas) {
        c.expect(d > 0.0, "expectile delta at level " + std::to_string(lv) + " must be positive");
    }
    c.expect(seconds <= 60.0, "runtime " + std::to_string(seconds) + "s exceeds 60s");
}

void criterion_2_oracle_equivalence(Checker& c) {
    std::mt19937_64 rng(2023);
    const double levels[] = {0.05, 0.25, 0.5, 0.75, 0.9, 0.95, 0.975};
    int worst_rep = -1;
    double worst = 0.0;
    for (int rep = 0; rep < 1000; ++rep) {
        const size_t n = 1 + rng() % 500;
        std::vector<double> s(n);
        for (double& v : s) v = -10.0 + 20.0 * u53(rng);
        const Level lv(levels[size_t(rep % 7)]);
        const double root = sample_expectile(s, lv);
        const double argmin = expectile_argmin_oracle(s, lv);
        const double err = std::abs(root - argmin) / (1.0 + std::abs(root));
        if (err > worst) {
            worst = err;
            worst_rep = rep;
        }
    }
    c.expect(worst <= 1e-6, "worst oracle disagreement " + std::to_string(worst) + " at rep " +
                                std::to_string(worst_rep));

    for (int rep = 0; rep < 300; ++rep) {
        std::vector<double> s(1 + rng() % 400);
        for (double& v : s) v = -5.0 + 25.0 * u53(rng);
        const double e = sample_expectile(s, Level(0.5));
        const double m = mean_of(s);
        c.expect(std::abs(e - m) <= 1e-12 * (1.0 + std::abs(m)),
                 "tau=0.5 expectile differs from the mean beyond 1e-12 relative");
    }
}

void criterion_3_loss_identities(Checker& c) {
    std::mt19937_64 rng(7);
    const double levels[] = {0.05, 0.25, 0.5, 0.75, 0.9, 0.95, 0.975};
    for (int i = 0; i < 10000; ++i) {
        const double r = -50.0 + 100.0 * u53(rng);
        const double x = -50.0 + 100.0 * u53(rng);
        const Level lv(levels[size_t(rng() % 7)]);

        c.expect(quantile_loss(r, x, Level(0.5)) == std::abs(r - x) / 2.0,
                 "quantile loss at 0.5 must reduce to half absolute error exactly");
        c.expect(expectile_loss(r, x, Level(0.5)) == (r - x) * (r - x) / 2.0,
                 "expectile loss at 0.5 must reduce to half squared error exactly");

        const double ql = quantile_loss(r, x, lv);
        const double el = expectile_loss(r, x, lv);
        c.expect(ql >= 0.0 && el >= 0.0, "losses must be non-negative");
        c.expect((ql == 0.0) == (r == x), "quantile loss zero iff r == x");
        c.expect((el == 0.0) == (r == x), "expectile loss zero iff r == x");

        const double d = 0.25 + 20.0 * u53(rng);
        const double want = (1.0 - lv.value()) / lv.value();
        const double e_ratio = expectile_loss(x + d, x, lv) / expectile_loss(x - d, x, lv);
        const double q_ratio = quantile_loss(x + d, x, lv) / quantile_loss(x - d, x, lv);
        c.expect(std::abs(e_ratio - want) <= 1e-12 * want, "expectile asymmetry ratio");
        c.expect(std::abs(q_ratio - want) <= 1e-12 * want, "quantile asymmetry ratio");
    }
}

void criterion_4_inverse_consistency(Checker& c) {
    std::mt19937_64 rng(31);
    const double levels[] = {0.05, 0.25, 0.5, 0.75, 0.9, 0.95, 0.975};
    for (int rep = 0; rep < 100; ++rep) {
        std::vector<double> s(2 + rng() % 300);
        for (double& v : s) v = -10.0 + 20.0 * u53(rng);
        for (double lv : levels) {
            const double e = sample_expectile(s, Level(lv));
            const double back = expectile_level_of_value(s, e);
            c.expect(std::abs(back - lv) <= 1e-9,
                     "inverse consistency violated at level " + std::to_string(lv));
        }
    }
}

void criterion_5_conservation(Checker& c) {
    std::mt19937_64 rng(88);
    const long n = 3653;  // ten years
    DailySeries precip{make_date(1990, 1, 1), std::vector<double>(size_t(n)), Unit::MmPerDay};
    DailySeries pet{make_date(1990, 1, 1), std::vector<double>(size_t(n)), Unit::MmPerDay};
    for (long i = 0; i < n; ++i) {
        precip.values[size_t(i)] = u53(rng) < 0.35 ? 25.0 * u53(rng) : 0.0;
        pet.values[size_t(i)] = 5.0 * u53(rng);
    }
    SimulationBudget budget;
    simulate(ModelId::Gr4j, Gr4jParams{350.0, 0.0, 90.0, 1.7}, precip, pet, &budget);
    c.expect(budget.total_exchange == 0.0, "exchange must vanish at x2 = 0");
    c.expect(std::abs(budget.residual()) <= 1e-6 * budget.total_precip,
             "water balance residual " + std::to_string(budget.residual()));

    for (int i = 0; i < 300; ++i) {
        const double x4 = 0.5 + 9.5 * u53(rng);
        const auto [o1, o2] = uh_ordinates(x4);
        const double s1 = std::accumulate(o1.begin(), o1.end(), 0.0);
        const double s2 = std::accumulate(o2.begin(), o2.end(), 0.0);
        c.expect(std::abs(s1 - 1.0) <= 1e-12 && std::abs(s2 - 1.0) <= 1e-12,
                 "unit hydrograph ordinates must sum to 1 within 1e-12");
    }

    const Gr4jParams params{150.0, 3.0, 40.0, 2.7};
    const Gr4jModel model(params);
    Gr4jState state = gr4j_initial_state(params);
    bool bounds_ok = true;
    for (int i = 0; i < 10000; ++i) {
        const double p = u53(rng) < 0.4 ? 40.0 * u53(rng) : 0.0;
        const double e = 6.0 * u53(rng);
        const StepFluxes f = model.step(state, p, e);
        bounds_ok = bounds_ok && f.discharge >= 0.0 && state.production >= 0.0 &&
                    state.production <= params.x1 && state.routing >= 0.0 &&
                    state.routing <= params.x3;
    }
    c.expect(bounds_ok, "store bounds violated during randomized stepping");
}

void criterion_6_self_recovery(Checker& c) {
    const BasinRecord basin = synth_basin(202, 12, 0.0);
    const Objective objective{LossKind::Expectile, Level(0.5),
                              DateRange{make_date(1980, 1, 1), make_date(1981, 12, 31)},
                              DateRange{make_date(1982, 1, 1), make_date(1991, 12, 31)}};
    SearchConfig cfg;  // default evaluation budget
    cfg.seed = 8;
    const CalibResult result = calibrate(ModelId::Gr4j, basin.precip_series(),
                                         basin.pet_series(), basin.streamflow_series(),
                                         objective, cfg);
    const double var = variance(basin.streamflow_series().slice(objective.calibration));
    c.expect(result.objective_value <= 1e-6 * var,
             "objective " + std::to_string(result.objective_value) + " above 1e-6 * var = " +
                 std::to_string(1e-6 * var));
    c.expect(result.n_evals <= cfg.max_evals, "evaluation budget exceeded");
    for (size_t i = 1; i < result.trace.size(); ++i) {
        c.expect(result.trace[i].second <= result.trace[i - 1].second,
                 "accepted-move trace must be non-increasing");
    }
}

void criterion_7_diag_targeting(Checker& c) {
    const BasinRecord basin = synth_basin(404, 34, 0.2);
    const SplitSpec split = paper_split();
    double prev_mean = -1.0;
    for (double tau : {0.5, 0.9, 0.95, 0.975}) {
        const Objective objective{LossKind::Expectile, Level(tau), split.warmup,
                                  split.calibration};
        SearchConfig cfg;
        cfg.seed = 21;
        const CalibResult result = calibrate(ModelId::Gr4j, basin.precip_series(),
                                             basin.pet_series(), basin.streamflow_series(),
                                             objective, cfg);
        const DailySeries sim = simulate(ModelId::Gr4j, result.params, basin.precip_series(),
                                         basin.pet_series());
        const EvalOutcome eval = evaluate_run(sim, basin.streamflow_series(),
                                              LossKind::Expectile, Level(tau), split.evaluation);
        char label[64];
        std::snprintf(label, sizeof(label), "diag level at tau %.3f", tau);
        c.expect_near(eval.diag_level, tau, 0.05, label);

        const double mean_sim = mean_of(sim.slice(split.evaluation));
        c.expect(mean_sim >= prev_mean,
                 "mean simulated flow must be non-decreasing in tau (tau " + std::to_string(tau) +
                     ")");
        prev_mean = mean_sim;
    }
}

void criterion_8_relative_score_machinery(Checker& c) {
    std::mt19937_64 rng(515);
    for (int i = 0; i < 2000; ++i) {
        const double b = 0.1 + 10.0 * u53(rng);
        const double m = 10.0 * u53(rng);
        const double scale = 0.01 + 100.0 * u53(rng);
        c.expect(relative_score(b, b) == 0.0, "self-comparison must be exactly 0");
        c.expect(std::abs(relative_score(scale * b, scale * m) - relative_score(b, m)) <= 1e-12,
                 "scale invariance beyond 1e-12");
    }

    // five-value fixture, hand-computed: rel scores {0.5, 0, -0.5, 0.5, -1}
    const double bench[] = {2.0, 2.0, 2.0, 3.0, 0.25};
    const double model[] = {1.0, 2.0, 3.0, 1.5, 0.5};
    std::vector<double> rel;
    for (int i = 0; i < 5; ++i) rel.push_back(relative_score(bench[i], model[i]));
    c.expect(rel == std::vector<double>{0.5, 0.0, -0.5, 0.5, -1.0}, "fixture relative scores");
    c.expect(exact_median(rel) == 0.0, "fixture median must be 0");
    c.expect(exact_median({0.1, 0.3}) == 0.2, "even-count median convention");

    const auto bins = histogram_truncated(rel, 0.25);
    std::vector<std::size_t> counts;
    for (const auto& b : bins) counts.push_back(b.count);
    c.expect(counts == std::vector<std::size_t>{2, 0, 1, 2},
             "fixture histogram counts (clamped edges)");
}

void criterion_9_out_of_scope_note() {
    std::printf(
        "[SKIP]  9. published 511-basin medians (-1.49%%, +3.73%%): not reproducible at desk "
        "scale by design\n         (needs the full CAMELS dataset and the five/six-parameter "
        "model structures; criteria 1-8 and 10 substitute)\n");
}

void criterion_10_pipeline_determinism(Checker& c) {
    namespace fs = std::filesystem;
    const fs::path work = fs::temp_directory_path() / "expectflow-acceptance";
    fs::remove_all(work);
    fs::create_directories(work);

    const BasinRecord basin = synth_basin(3, 10, 0.15);
    write_basin_csv(basin, (work / "synth.csv").string());

    RunConfig cfg;
    cfg.basin_files = {(work / "synth.csv").string()};
    cfg.models = {ModelId::Gr4j, ModelId::Lr2};
    cfg.benchmark_model = ModelId::Lr2;
    cfg.loss_kinds = {LossKind::Expectile};
    cfg.levels = {0.5, 0.975};
    cfg.split = SplitSpec{DateRange{make_date(1980, 1, 1), make_date(1981, 12, 31)},
                          DateRange{make_date(1982, 1, 1), make_date(1985, 12, 31)},
                          DateRange{make_date(1986, 1, 1), make_date(1989, 12, 31)}};
    cfg.search.screen_count = 40;
    cfg.search.max_evals = 800;
    cfg.seed = 11;

    const PipelineResult r1 = run_pipeline(cfg);
    write_report(r1, cfg, (work / "out1").string());
    const PipelineResult r2 = run_pipeline(cfg);
    write_report(r2, cfg, (work / "out2").string());

    c.expect(r1.failures.empty(), "pipeline must not report failures");
    c.expect(r1.records.size() == 4, "expected 4 run records (2 models x 2 levels)");
    for (const char* name : {"relative_scores.csv", "medians_heatmap.csv",
                             "diag_levels_heatmap.csv", "histogram.csv", "loss_curves.csv",
                             "manifest.json"}) {
        const std::string a = slurp((work / "out1" / name).string());
        const std::string b = slurp((work / "out2" / name).string());
        c.expect(!a.empty() && a == b, std::string(name) + " must be byte-identical on rerun");
    }
    fs::remove_all(work);
}

}  // namespace

int main() {
    std::printf("acceptance suite, version %s\n", kVersion);
    run_criterion(1, "tail experiment reproduces the reference values at n = 1e7",
                  criterion_1_tail_experiment);
    run_criterion(2, "estimator oracle equivalence over 1000 seeded samples",
                  criterion_2_oracle_equivalence);
    run_criterion(3, "loss identities on 1e4 random triples", criterion_3_loss_identities);
    run_criterion(4, "expectile level inverts the expectile within 1e-9",
                  criterion_4_inverse_consistency);
    run_criterion(5, "hydrology conservation, ordinate sums and store bounds",
                  criterion_5_conservation);
    run_criterion(6, "noise-free self-recovery at tau = 0.5", criterion_6_self_recovery);
    run_criterion(7, "diagnostic level targets tau on the heteroscedastic basin",
                  criterion_7_diag_targeting);
    run_criterion(8, "relative-score identities, medians and truncated histogram",
                  criterion_8_relative_score_machinery);
    criterion_9_out_of_scope_note();
    run_criterion(10, "full pipeline is byte-identical across reruns",
                  criterion_10_pipeline_determinism);

    if (g_failed > 0) {
        std::printf("%d criterion(s) failed\n", g_failed);
        return 1;
    }
    std::printf("all criteria passed\n");
    return 0;
}
