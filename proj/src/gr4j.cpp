#include "expectflow/gr4j.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>
#include <tuple>

namespace expectflow {

namespace {

double sh1(double t, double x4) {
    if (t <= 0.0) return 0.0;
    if (t >= x4) return 1.0;
    return std::pow(t / x4, 2.5);
}

double sh2(double t, double x4) {
    if (t <= 0.0) return 0.0;
    if (t <= x4) return 0.5 * std::pow(t / x4, 2.5);
    if (t < 2.0 * x4) return 1.0 - 0.5 * std::pow(2.0 - t / x4, 2.5);
    return 1.0;
}

}  // namespace

void validate(const Gr4jParams& p) {
    if (!(p.x1 > 0.0)) throw std::invalid_argument("x1 must be positive");
    if (!(p.x3 > 0.0)) throw std::invalid_argument("x3 must be positive");
    if (!(p.x4 >= 0.5)) throw std::invalid_argument("x4 must be >= 0.5");
    if (!std::isfinite(p.x2)) throw std::invalid_argument("x2 must be finite");
}

std::pair<std::vector<double>, std::vector<double>> uh_ordinates(double x4) {
    if (!(x4 >= 0.5)) {
        throw std::domain_error("unit hydrograph time base must be >= 0.5 days, got " +
                                std::to_string(x4));
    }
    const int n1 = static_cast<int>(std::ceil(x4));
    const int n2 = static_cast<int>(std::ceil(2.0 * x4));
    if (n1 > kUh1Len || n2 > kUh2Len) {
        throw std::domain_error("x4 too large for the fixed unit hydrograph buffers");
    }
    std::vector<double> o1(n1), o2(n2);
    for (int j = 0; j < n1; ++j) o1[j] = sh1(j + 1.0, x4) - sh1(double(j), x4);
    for (int j = 0; j < n2; ++j) o2[j] = sh2(j + 1.0, x4) - sh2(double(j), x4);
    return {std::move(o1), std::move(o2)};
}

double Gr4jState::buffered() const {
    return std::accumulate(uh1.begin(), uh1.end(), 0.0) +
           std::accumulate(uh2.begin(), uh2.end(), 0.0);
}

Gr4jState gr4j_initial_state(const Gr4jParams& p) {
    validate(p);
    Gr4jState s;
    s.production = 0.3 * p.x1;
    s.routing = 0.5 * p.x3;
    return s;
}

Gr4jModel::Gr4jModel(const Gr4jParams& params) : params_(params) {
    validate(params);
    std::tie(uh1_ords_, uh2_ords_) = uh_ordinates(params.x4);
}

StepFluxes Gr4jModel::step(Gr4jState& state, double precip, double pet) const {
    if (!(precip >= 0.0) || !(pet >= 0.0)) {
        throw std::domain_error("forcings must be non-negative");
    }
    const Gr4jParams& params = params_;
    const double x1 = params.x1;

    // Interception: the smaller of P and E never reaches the stores.
    double pn, en;
    if (precip >= pet) {
        pn = precip - pet;
        en = 0.0;
    } else {
        pn = 0.0;
        en = pet - precip;
    }

    double s = state.production;
    const double tanh_pn = std::tanh(pn / x1);
    const double ps = x1 * (1.0 - (s / x1) * (s / x1)) * tanh_pn / (1.0 + (s / x1) * tanh_pn);
    const double tanh_en = std::tanh(en / x1);
    const double es = s * (2.0 - s / x1) * tanh_en / (1.0 + (1.0 - s / x1) * tanh_en);
    s += ps - es;

    const double rel = 4.0 * s / (9.0 * x1);
    const double perc = s * (1.0 - std::pow(1.0 + rel * rel * rel * rel, -0.25));
    s -= perc;
    state.production = s;

    const double pr = perc + (pn - ps);

    for (size_t j = 0; j < uh1_ords_.size(); ++j) state.uh1[j] += 0.9 * pr * uh1_ords_[j];
    for (size_t j = 0; j < uh2_ords_.size(); ++j) state.uh2[j] += 0.1 * pr * uh2_ords_[j];
    const double uh1_out = state.uh1[0];
    const double uh2_out = state.uh2[0];
    std::rotate(state.uh1.begin(), state.uh1.begin() + 1, state.uh1.end());
    state.uh1.back() = 0.0;
    std::rotate(state.uh2.begin(), state.uh2.begin() + 1, state.uh2.end());
    state.uh2.back() = 0.0;

    double r = state.routing;
    const double f = params.x2 * std::pow(r / params.x3, 3.5);

    // Exchange actually applied can be clipped by the non-negativity floors.
    double exchange_applied = 0.0;
    const double r_raw = r + uh1_out + f;
    if (r_raw >= 0.0) {
        exchange_applied += f;
        r = r_raw;
    } else {
        exchange_applied += -(r + uh1_out);
        r = 0.0;
    }

    const double rr = r / params.x3;
    const double qr = r * (1.0 - std::pow(1.0 + rr * rr * rr * rr, -0.25));
    r -= qr;
    state.routing = r;

    const double qd_raw = uh2_out + f;
    double qd;
    if (qd_raw >= 0.0) {
        exchange_applied += f;
        qd = qd_raw;
    } else {
        exchange_applied += -uh2_out;
        qd = 0.0;
    }

    StepFluxes out;
    out.discharge = qr + qd;
    out.aet = es + std::min(precip, pet);
    out.exchange = exchange_applied;
    return out;
}

StepFluxes gr4j_step(Gr4jState& state, double precip, double pet, const Gr4jParams& params) {
    return Gr4jModel(params).step(state, precip, pet);
}

}  // namespace expectflow
