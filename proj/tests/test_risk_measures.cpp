#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "expectflow/errors.hpp"
#include "expectflow/risk_measures.hpp"

using namespace expectflow;

namespace {

double u53(std::mt19937_64& rng) {
    return double(rng() >> 11) * 0x1.0p-53;
}

std::vector<double> random_sample(std::mt19937_64& rng, size_t n, double lo = -10.0,
                                  double hi = 10.0) {
    std::vector<double> s(n);
    for (double& v : s) v = lo + (hi - lo) * u53(rng);
    return s;
}

double mean_of(const std::vector<double>& s) {
    double acc = 0.0;
    for (double v : s) acc += v;
    return acc / double(s.size());
}

}  // namespace

TEST_SUITE("risk_measures") {

TEST_CASE("level rejects values outside (0,1)") {
    CHECK_THROWS_AS(Level(0.0), std::invalid_argument);
    CHECK_THROWS_AS(Level(1.0), std::invalid_argument);
    CHECK_THROWS_AS(Level(-0.1), std::invalid_argument);
    CHECK_THROWS_AS(Level(1.5), std::invalid_argument);
    CHECK(Level(0.5).value() == 0.5);
}

TEST_CASE("quantile loss pointwise values") {
    CHECK(quantile_loss(1.0, 0.0, Level(0.95)) == doctest::Approx(0.05).epsilon(1e-14));
    CHECK(quantile_loss(3.7, 3.7, Level(0.25)) == 0.0);
    CHECK(quantile_loss(-1.0, 0.0, Level(0.95)) == doctest::Approx(0.95).epsilon(1e-14));
    CHECK_THROWS_AS(quantile_loss(std::nan(""), 0.0, Level(0.5)), std::invalid_argument);
    CHECK_THROWS_AS(quantile_loss(0.0, INFINITY, Level(0.5)), std::invalid_argument);
}

TEST_CASE("expectile loss pointwise values") {
    CHECK(expectile_loss(1.0, 0.0, Level(0.95)) == doctest::Approx(0.05).epsilon(1e-14));
    CHECK(expectile_loss(-2.0, 0.0, Level(0.95)) == doctest::Approx(3.8).epsilon(1e-14));
    CHECK(expectile_loss(3.0, 1.0, Level(0.5)) == 2.0);
    CHECK_THROWS_AS(expectile_loss(1.0, std::nan(""), Level(0.5)), std::invalid_argument);
}

TEST_CASE("loss identities over random triples") {
    std::mt19937_64 rng(7);
    const double levels[] = {0.05, 0.25, 0.5, 0.75, 0.9, 0.95, 0.975};
    for (int i = 0; i < 10000; ++i) {
        const double r = -50.0 + 100.0 * u53(rng);
        const double x = -50.0 + 100.0 * u53(rng);
        const Level lv(levels[size_t(rng() % 7)]);
        const double ql = quantile_loss(r, x, lv);
        const double el = expectile_loss(r, x, lv);

        // non-negative, zero iff r == x
        CHECK(ql >= 0.0);
        CHECK(el >= 0.0);
        if (r != x) {
            CHECK(ql > 0.0);
            CHECK(el > 0.0);
        }

        // symmetric reductions hold bitwise: the 0.5 factor is exact
        CHECK(quantile_loss(r, x, Level(0.5)) == std::abs(r - x) / 2.0);
        CHECK(expectile_loss(r, x, Level(0.5)) == (r - x) * (r - x) / 2.0);

        // asymmetry ratio (1-tau)/tau for over- vs under-prediction
        const double d = 0.5 + 10.0 * u53(rng);
        const double over = expectile_loss(x + d, x, lv);
        const double under = expectile_loss(x - d, x, lv);
        CHECK(over / under ==
              doctest::Approx((1.0 - lv.value()) / lv.value()).epsilon(1e-12));
        const double q_over = quantile_loss(x + d, x, lv);
        const double q_under = quantile_loss(x - d, x, lv);
        CHECK(q_over / q_under ==
              doctest::Approx((1.0 - lv.value()) / lv.value()).epsilon(1e-12));
    }
}

TEST_CASE("expectile loss first derivative is continuous across r = x") {
    const double h = 1e-6;
    for (double tau : {0.05, 0.5, 0.975}) {
        for (double x : {-3.2, 0.0, 7.5}) {
            const Level lv(tau);
            const double right = (expectile_loss(x + h, x, lv) - expectile_loss(x, x, lv)) / h;
            const double left = (expectile_loss(x, x, lv) - expectile_loss(x - h, x, lv)) / h;
            CHECK(std::abs(right) < 1e-5);
            CHECK(std::abs(left) < 1e-5);
            const double central =
                (expectile_loss(x + h, x, lv) - expectile_loss(x - h, x, lv)) / (2.0 * h);
            CHECK(std::abs(central) < 1e-5);
        }
    }
}

TEST_CASE("sample quantile ignores interpolation and follows the left-continuous rule") {
    const std::vector<double> s{1.0, 2.0, 3.0, 4.0};
    CHECK(sample_quantile(s, Level(0.5)) == 2.0);
    const std::vector<double> one{5.0};
    for (double a : {0.01, 0.5, 0.99}) CHECK(sample_quantile(one, Level(a)) == 5.0);
    CHECK_THROWS_AS(sample_quantile(std::vector<double>{}, Level(0.5)), std::invalid_argument);
}

TEST_CASE("sample quantile satisfies the defining frequency property") {
    std::mt19937_64 rng(11);
    for (int rep = 0; rep < 200; ++rep) {
        const auto s = random_sample(rng, 1 + rng() % 80);
        const double a = 0.02 + 0.96 * u53(rng);
        const double q = sample_quantile(s, Level(a));

        CHECK(std::find(s.begin(), s.end(), q) != s.end());
        const auto frac_leq = [&](double v) {
            long c = 0;
            for (double x : s) c += x <= v ? 1 : 0;
            return double(c) / double(s.size());
        };
        CHECK(frac_leq(q) >= a);
        // minimality: every strictly smaller sample value fails the property
        for (double w : s) {
            if (w < q) CHECK(frac_leq(w) < a);
        }
    }
}

TEST_CASE("sample expectile closed-form cases") {
    const std::vector<double> s123{1.0, 2.0, 3.0};
    CHECK(sample_expectile(s123, Level(0.5)) == doctest::Approx(2.0).epsilon(1e-14));

    // tau*(1-e) = (1-tau)*e  =>  e = tau for the sample {0,1}
    const std::vector<double> s01{0.0, 1.0};
    CHECK(sample_expectile(s01, Level(0.9)) == doctest::Approx(0.9).epsilon(1e-12));
    CHECK(expectile_argmin_oracle(s01, Level(0.9)) == doctest::Approx(0.9).epsilon(1e-6));
    CHECK(expectile_argmin_oracle(s123, Level(0.5)) == doctest::Approx(2.0).epsilon(1e-8));

    CHECK_THROWS_AS(sample_expectile(std::vector<double>{}, Level(0.5)), std::invalid_argument);
    CHECK_THROWS_AS(expectile_argmin_oracle(std::vector<double>{}, Level(0.5)),
                    std::invalid_argument);
}

TEST_CASE("sample expectile agrees with the argmin oracle on 1000 seeded samples") {
    std::mt19937_64 rng(2023);
    const double levels[] = {0.05, 0.25, 0.5, 0.75, 0.9, 0.95, 0.975};
    for (int rep = 0; rep < 1000; ++rep) {
        const size_t n = 1 + rng() % 500;
        const auto s = random_sample(rng, n);  // streamflow-scale magnitudes
        const Level lv(levels[size_t(rep % 7)]);
        const double root = sample_expectile(s, lv);
        const double argmin = expectile_argmin_oracle(s, lv);
        CHECK(std::abs(root - argmin) <= 1e-6 * (1.0 + std::abs(root)));
    }
}

TEST_CASE("sample expectile at tau 0.5 is the mean to 1e-12 relative") {
    std::mt19937_64 rng(99);
    for (int rep = 0; rep < 200; ++rep) {
        const auto s = random_sample(rng, 1 + rng() % 400, -5.0, 20.0);
        const double e = sample_expectile(s, Level(0.5));
        const double m = mean_of(s);
        CHECK(std::abs(e - m) <= 1e-12 * (1.0 + std::abs(m)));
    }
}

TEST_CASE("sample expectile is monotone in the level and bounded by the range") {
    std::mt19937_64 rng(5);
    const double levels[] = {0.05, 0.25, 0.5, 0.75, 0.9, 0.95, 0.975};
    for (int rep = 0; rep < 100; ++rep) {
        const auto s = random_sample(rng, 2 + rng() % 200);
        const auto [lo, hi] = std::minmax_element(s.begin(), s.end());
        double prev_e = -1e300;
        double prev_q = -1e300;
        for (double lv : levels) {
            const double e = sample_expectile(s, Level(lv));
            const double q = sample_quantile(s, Level(lv));
            CHECK(e >= prev_e - 1e-12);
            CHECK(q >= prev_q);
            CHECK(e >= *lo);
            CHECK(e <= *hi);
            prev_e = e;
            prev_q = q;
        }
    }
}

TEST_CASE("expectile level of a value: closed forms and the degenerate convention") {
    const std::vector<double> s01{0.0, 1.0};
    CHECK(expectile_level_of_value(s01, 0.9) == doctest::Approx(0.9).epsilon(1e-14));
    const std::vector<double> flat{3.3, 3.3, 3.3};
    CHECK(expectile_level_of_value(flat, 3.3) == 0.5);
}

TEST_CASE("expectile level inverts sample expectile within 1e-9") {
    std::mt19937_64 rng(31);
    const double levels[] = {0.05, 0.25, 0.5, 0.75, 0.9, 0.95, 0.975};
    for (int rep = 0; rep < 100; ++rep) {
        const auto s = random_sample(rng, 2 + rng() % 300);
        for (double lv : levels) {
            const double e = sample_expectile(s, Level(lv));
            CHECK(std::abs(expectile_level_of_value(s, e) - lv) <= 1e-9);
        }
    }
}

TEST_CASE("expectile level is monotone non-decreasing in e") {
    std::mt19937_64 rng(17);
    const auto s = random_sample(rng, 250);
    double prev = -1.0;
    for (double e = -12.0; e <= 12.0; e += 0.25) {
        const double lv = expectile_level_of_value(s, e);
        CHECK(lv >= prev);
        CHECK(lv >= 0.0);
        CHECK(lv <= 1.0);
        prev = lv;
    }
}

TEST_CASE("prediction expectile level diagnostics") {
    const DailySeries obs{make_date(2000, 1, 1), {1.0, 2.0, 3.0}, Unit::MmPerDay};
    SUBCASE("identical series hit the degenerate convention") {
        CHECK(prediction_expectile_level(obs, obs) == 0.5);
    }
    SUBCASE("dominating simulation yields level 1") {
        DailySeries sim = obs;
        sim.values = {1.0, 2.5, 3.0};
        CHECK(prediction_expectile_level(obs, sim) == 1.0);
    }
    SUBCASE("balanced over/under deviations yield 0.5") {
        const DailySeries o{make_date(2000, 1, 1), {1.0, 2.0}, Unit::MmPerDay};
        const DailySeries m{make_date(2000, 1, 1), {2.0, 1.0}, Unit::MmPerDay};
        CHECK(prediction_expectile_level(o, m) == 0.5);
    }
    SUBCASE("misaligned series are rejected") {
        const DailySeries shifted{make_date(2000, 1, 2), {1.0, 2.0, 3.0}, Unit::MmPerDay};
        CHECK_THROWS_AS(prediction_expectile_level(obs, shifted), validation_error);
    }
}

TEST_CASE("return periods") {
    CHECK(return_period_from_level(Level(0.975)) == doctest::Approx(40.0).epsilon(1e-13));
    CHECK(return_period_from_level(Level(0.5)) == 2.0);
    CHECK(return_period_from_level(Level(0.99)) == doctest::Approx(100.0).epsilon(1e-13));
}

TEST_CASE("sample expectile recovers the exponential distribution's analytic expectile") {
    // For Exp(1): E(X-e)+ = exp(-e), E(e-X)+ = e - 1 + exp(-e); the level of
    // e is their ratio per the defining equation. Solve for e by bisection.
    const auto analytic_expectile = [](double tau) {
        const auto tau_of = [](double e) {
            const double ma = std::exp(-e);
            const double mb = e - 1.0 + ma;
            return mb / (mb + ma);
        };
        double lo = 0.0, hi = 60.0;
        for (int i = 0; i < 200; ++i) {
            const double mid = 0.5 * (lo + hi);
            (tau_of(mid) < tau ? lo : hi) = mid;
        }
        return 0.5 * (lo + hi);
    };
    // spot anchors computed independently
    CHECK(analytic_expectile(0.9) == doctest::Approx(2.04011258224).epsilon(1e-9));
    CHECK(analytic_expectile(0.975) == doctest::Approx(2.96307436289).epsilon(1e-9));

    std::mt19937_64 rng(424242);
    std::vector<double> s(1000000);
    for (double& v : s) v = -std::log1p(-u53(rng));

    for (double tau : {0.05, 0.25, 0.5, 0.75, 0.9, 0.95, 0.975}) {
        const double est = sample_expectile(s, Level(tau));
        CHECK(std::abs(est - analytic_expectile(tau)) <= 0.01);
    }
}

TEST_CASE("mean loss helper matches the pointwise losses") {
    const std::vector<double> obs{1.0, 2.0, 3.0};
    const std::vector<double> sim{2.0, 3.0, 4.0};  // obs + 1
    CHECK(mean_loss(obs, sim, LossKind::Expectile, Level(0.5)) ==
          doctest::Approx(0.5).epsilon(1e-14));
    CHECK(mean_loss(obs, sim, LossKind::Expectile, Level(0.975)) ==
          doctest::Approx(0.025).epsilon(1e-12));
    CHECK(mean_loss(obs, obs, LossKind::Quantile, Level(0.9)) == 0.0);
    CHECK_THROWS_AS(mean_loss(obs, std::vector<double>{1.0}, LossKind::Quantile, Level(0.9)),
                    std::invalid_argument);
}

}  // TEST_SUITE
