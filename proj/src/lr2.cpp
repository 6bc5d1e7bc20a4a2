#include "expectflow/lr2.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace expectflow {

void validate(const Lr2Params& p) {
    if (!(p.c > 0.0)) throw std::invalid_argument("storage capacity must be positive");
    if (!(p.k >= 1.0)) throw std::invalid_argument("residence time must be >= 1 day");
}

StepFluxes lr2_step(double& storage, double precip, double pet, const Lr2Params& params) {
    if (!(precip >= 0.0) || !(pet >= 0.0)) {
        throw std::domain_error("forcings must be non-negative");
    }
    const double w_plus = storage + precip;
    const double overflow = std::max(0.0, w_plus - params.c);
    const double w1 = std::min(w_plus, params.c);
    const double et_demand = pet * (w1 / params.c);
    const double w2 = std::max(0.0, w1 - et_demand);
    const double drainage = w2 / params.k;

    StepFluxes out;
    out.discharge = overflow + drainage;
    out.aet = w1 - w2;  // demand clipped by available water
    out.exchange = 0.0;
    storage = w2 - drainage;
    return out;
}

}  // namespace expectflow
