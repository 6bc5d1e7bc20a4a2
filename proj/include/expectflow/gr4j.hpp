#pragma once

#include <array>
#include <utility>
#include <vector>

namespace expectflow {

/// The four free parameters: production store capacity [mm], groundwater
/// exchange coefficient [mm/day], routing store capacity [mm], and unit
/// hydrograph time base [days].
struct Gr4jParams {
    double x1 = 350.0;
    double x2 = 0.0;
    double x3 = 90.0;
    double x4 = 1.7;
};

void validate(const Gr4jParams& p);

inline constexpr int kUh1Len = 20;
inline constexpr int kUh2Len = 40;

/// S-curve derived unit hydrograph ordinates. Each set sums to 1; uh2
/// spreads over twice the time base of uh1.
std::pair<std::vector<double>, std::vector<double>> uh_ordinates(double x4);

/// Production store, routing store and the in-flight unit hydrograph water.
/// Slot 0 of a buffer is the water leaving on the current day.
struct Gr4jState {
    double production = 0.0;  // [mm], 0 <= production <= x1
    double routing = 0.0;     // [mm], 0 <= routing <= x3
    std::array<double, kUh1Len> uh1{};
    std::array<double, kUh2Len> uh2{};

    double buffered() const;
    double total_storage() const { return production + routing + buffered(); }
};

/// Initial state per the fixed convention: s = 0.3*x1, r = 0.5*x3, empty
/// buffers. The 2-year warm-up makes results insensitive to this choice.
Gr4jState gr4j_initial_state(const Gr4jParams& p);

/// Per-day water accounting alongside the discharge; `exchange` is the
/// groundwater flux actually applied (after the non-negativity floors), so
/// the balance P = AET + Q + dStorage - exchange closes exactly.
struct StepFluxes {
    double discharge = 0.0;  // [mm/day]
    double aet = 0.0;        // actual evapotranspiration [mm/day]
    double exchange = 0.0;   // applied groundwater exchange [mm/day], signed
};

/// Parameter set with its unit hydrograph ordinates precomputed; the step
/// runs ~10^8 times during calibration, so the ordinates must not be
/// rebuilt per day.
class Gr4jModel {
public:
    explicit Gr4jModel(const Gr4jParams& params);

    /// One day: interception, production store with percolation, 90/10 split
    /// through the two unit hydrographs, groundwater exchange
    /// f = x2*(r/x3)^3.5 on both branches, nonlinear routing store.
    StepFluxes step(Gr4jState& state, double precip, double pet) const;

    const Gr4jParams& params() const { return params_; }

private:
    Gr4jParams params_;
    std::vector<double> uh1_ords_;
    std::vector<double> uh2_ords_;
};

/// Single-step convenience wrapper over Gr4jModel.
StepFluxes gr4j_step(Gr4jState& state, double precip, double pet, const Gr4jParams& params);

}  // namespace expectflow
