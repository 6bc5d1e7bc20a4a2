#pragma once

#include <string>
#include <variant>
#include <vector>

#include "expectflow/daily_series.hpp"
#include "expectflow/gr4j.hpp"
#include "expectflow/lr2.hpp"

namespace expectflow {

enum class ModelId { Gr4j, Lr2 };

ModelId model_id_from_string(const std::string& name);
std::string to_string(ModelId id);

using ModelParams = std::variant<Gr4jParams, Lr2Params>;

/// Search-space metadata per parameter: bounds in natural units plus the
/// monotone transform the optimizer works in.
struct ParamAxis {
    const char* name;
    double lower;
    double upper;
    double (*to_search)(double);
    double (*from_search)(double);
};

const std::vector<ParamAxis>& param_axes(ModelId id);

ModelParams params_from_natural(ModelId id, const std::vector<double>& natural);
std::vector<double> natural_from_params(const ModelParams& params);

/// Daily water budget of a full run, for conservation checks.
struct SimulationBudget {
    double total_precip = 0.0;
    double total_aet = 0.0;
    double total_discharge = 0.0;
    double total_exchange = 0.0;
    double storage_initial = 0.0;
    double storage_final = 0.0;

    /// P - AET - Q - dStorage + exchange; zero up to rounding.
    double residual() const {
        return total_precip - total_aet - total_discharge -
               (storage_final - storage_initial) + total_exchange;
    }
};

/// Runs the model over the full aligned forcing record from the fixed
/// initial state and returns daily discharge [mm/day]. Callers slice off
/// the warm-up themselves.
DailySeries simulate(ModelId id, const ModelParams& params, const DailySeries& precip,
                     const DailySeries& pet, SimulationBudget* budget = nullptr);

}  // namespace expectflow
