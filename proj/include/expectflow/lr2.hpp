#pragma once

#include "expectflow/gr4j.hpp"  // StepFluxes

namespace expectflow {

/// Two-parameter linear-reservoir benchmark: storage capacity [mm] and
/// residence time [days].
struct Lr2Params {
    double c = 200.0;
    double k = 20.0;
};

void validate(const Lr2Params& p);

/// One day: fill, spill the overflow, evaporate proportionally to fill
/// level, drain the remainder at rate 1/k.
///   w+ = w + p; o = max(0, w+ - c); w1 = min(w+, c);
///   et = e * w1/c; w2 = max(0, w1 - et); q = o + w2/k; w' = w2 - w2/k.
StepFluxes lr2_step(double& storage, double precip, double pet, const Lr2Params& params);

inline double lr2_initial_state(const Lr2Params& p) { return 0.5 * p.c; }

}  // namespace expectflow
