#include "gfess/analysis.hpp"

#include <cmath>

#include "gfess/errors.hpp"

namespace gfess {

EnergyReport energy_report(const SgParams& sg, const VsmParams& vsm, const EssParams& ess, double delta_p_l) {
    sg.validate();
    vsm.validate();
    ess.validate();
    if (!(sg.ki_sg > 0.0)) {
        throw DivergenceError("ki_sg = 0: without secondary control the storage keeps supplying the "
                              "load and its steady-state energy is unbounded");
    }
    EnergyReport r;
    r.delta_p_l = delta_p_l;
    r.delta_e_hd = vsm.d_vsm / sg.ki_sg * delta_p_l;
    r.delta_e_gov = vsm.kp_vsm / sg.ki_sg * delta_p_l;
    r.delta_e_vsm = r.delta_e_hd + r.delta_e_gov;
    r.delta_soc = r.delta_e_vsm / ess.e_nom;
    return r;
}

EnergyReport energy_report_via_final_value(const SystemModel& model, const EssParams& ess, double delta_p_l) {
    ess.validate();
    EnergyReport r;
    r.delta_p_l = delta_p_l;
    // Energy is the integral of power: E(s) = P(s)/s, and a step load adds another 1/s.
    r.delta_e_hd = final_value_of_step_response(model.tf_p_hd.divided_by_s(), delta_p_l);
    r.delta_e_gov = final_value_of_step_response(model.tf_p_gov.divided_by_s(), delta_p_l);
    r.delta_e_vsm = r.delta_e_hd + r.delta_e_gov;
    r.delta_soc = r.delta_e_vsm / ess.e_nom;
    return r;
}

LoopBandwidths estimate_bandwidths(const SgParams& sg, const VsmParams& vsm, const EssParams& ess) {
    const double gains = sg.kp_sg + vsm.kp_vsm + sg.d_sg + vsm.d_vsm;
    const double inertia = sg.h_sg + vsm.h_vsm;
    if (!(inertia > 0.0)) {
        throw DegenerateModelError("primary bandwidth: h_sg + h_vsm must be positive");
    }
    if (!(gains > 0.0)) {
        throw DegenerateModelError("secondary bandwidth: kp_sg + kp_vsm + d_sg + d_vsm must be positive");
    }
    if (!(ess.e_nom > 0.0)) {
        throw DegenerateModelError("SoC bandwidth: e_nom must be positive");
    }
    return LoopBandwidths{
        .primary = gains / inertia,
        .secondary = sg.ki_sg / gains,
        .soc = ess.kp_e / ess.e_nom,
    };
}

BandwidthReport bandwidth_report(const SgParams& sg, const VsmParams& vsm, const EssParams& ess,
                                 double separation_factor, const BandwidthSearch& search) {
    if (!(separation_factor >= 1.0)) {
        throw InvalidParameterError("separation_factor", "must be >= 1");
    }
    BandwidthReport r;
    r.separation_factor = separation_factor;
    r.analytic = estimate_bandwidths(sg, vsm, ess);
    r.measured.primary = measure_bandwidth(simplified_primary_model(sg, vsm), 1.0, search);
    r.measured.secondary = measure_bandwidth(simplified_secondary_model(sg, vsm), 1.0, search);
    r.measured.soc = measure_bandwidth(simplified_soc_model(ess), 1.0, search);
    r.separation_ratios = {r.analytic.primary / r.analytic.secondary, r.analytic.secondary / r.analytic.soc};
    r.separation_ok =
        r.separation_ratios.first >= separation_factor && r.separation_ratios.second >= separation_factor;
    return r;
}

double full_model_secondary_bandwidth(const SystemModel& model, const BandwidthSearch& search) {
    if (!(model.sg.ki_sg > 0.0)) {
        throw DegenerateModelError("secondary bandwidth: ki_sg must be positive");
    }
    const auto secondary = cancel_origin_factors(model.g_f.divided_by_s());
    return measure_bandwidth(secondary, 1.0 / model.sg.ki_sg, search);
}

}  // namespace gfess
