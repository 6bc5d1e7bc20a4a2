#include "expectflow/model.hpp"

#include <cmath>
#include <stdexcept>

#include "expectflow/errors.hpp"

namespace expectflow {

namespace {

double log_fwd(double v) { return std::log(v); }
double log_inv(double t) { return std::exp(t); }

// Signed exchange coefficient spans [-10, 10]; asinh(x/4) compresses the
// range symmetrically so a uniform search step stays meaningful.
double asinh4_fwd(double v) { return std::asinh(v / 4.0); }
double asinh4_inv(double t) { return 4.0 * std::sinh(t); }

const std::vector<ParamAxis> kGr4jAxes = {
    {"x1", 10.0, 3000.0, log_fwd, log_inv},
    {"x2", -10.0, 10.0, asinh4_fwd, asinh4_inv},
    {"x3", 5.0, 1000.0, log_fwd, log_inv},
    {"x4", 0.5, 10.0, log_fwd, log_inv},
};

const std::vector<ParamAxis> kLr2Axes = {
    {"c", 10.0, 2000.0, log_fwd, log_inv},
    {"k", 1.0, 200.0, log_fwd, log_inv},
};

}  // namespace

ModelId model_id_from_string(const std::string& name) {
    if (name == "gr4j") return ModelId::Gr4j;
    if (name == "lr2") return ModelId::Lr2;
    throw validation_error("unknown model '" + name + "' (expected gr4j or lr2)");
}

std::string to_string(ModelId id) {
    return id == ModelId::Gr4j ? "gr4j" : "lr2";
}

const std::vector<ParamAxis>& param_axes(ModelId id) {
    return id == ModelId::Gr4j ? kGr4jAxes : kLr2Axes;
}

ModelParams params_from_natural(ModelId id, const std::vector<double>& natural) {
    const auto& axes = param_axes(id);
    if (natural.size() != axes.size()) {
        throw std::invalid_argument("parameter vector has wrong dimension");
    }
    if (id == ModelId::Gr4j) {
        return Gr4jParams{natural[0], natural[1], natural[2], natural[3]};
    }
    return Lr2Params{natural[0], natural[1]};
}

std::vector<double> natural_from_params(const ModelParams& params) {
    if (const auto* g = std::get_if<Gr4jParams>(&params)) {
        return {g->x1, g->x2, g->x3, g->x4};
    }
    const auto& l = std::get<Lr2Params>(params);
    return {l.c, l.k};
}

DailySeries simulate(ModelId id, const ModelParams& params, const DailySeries& precip,
                     const DailySeries& pet, SimulationBudget* budget) {
    require_aligned(precip, pet, "simulate");

    DailySeries q{precip.start, std::vector<double>(precip.values.size()), Unit::MmPerDay};
    SimulationBudget b;

    if (id == ModelId::Gr4j) {
        const Gr4jModel model(std::get<Gr4jParams>(params));
        Gr4jState state = gr4j_initial_state(model.params());
        b.storage_initial = state.total_storage();
        for (size_t i = 0; i < precip.values.size(); ++i) {
            const StepFluxes f = model.step(state, precip.values[i], pet.values[i]);
            q.values[i] = f.discharge;
            b.total_precip += precip.values[i];
            b.total_aet += f.aet;
            b.total_discharge += f.discharge;
            b.total_exchange += f.exchange;
        }
        b.storage_final = state.total_storage();
    } else {
        const Lr2Params& lp = std::get<Lr2Params>(params);
        validate(lp);
        double storage = lr2_initial_state(lp);
        b.storage_initial = storage;
        for (size_t i = 0; i < precip.values.size(); ++i) {
            const StepFluxes f = lr2_step(storage, precip.values[i], pet.values[i], lp);
            q.values[i] = f.discharge;
            b.total_precip += precip.values[i];
            b.total_aet += f.aet;
            b.total_discharge += f.discharge;
        }
        b.storage_final = storage;
    }

    if (budget != nullptr) *budget = b;
    return q;
}

}  // namespace expectflow
