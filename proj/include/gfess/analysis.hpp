#pragma once

#include <optional>
#include <utility>

#include "gfess/lti.hpp"
#include "gfess/system.hpp"

namespace gfess {

/// Steady-state energy the storage spends on each VSM service after a load step.
/// Positive values mean energy discharged for a load increase.
struct EnergyReport {
    double delta_e_hd = 0.0;  ///< inertia + damping [p.u.*s]
    double delta_e_gov = 0.0; ///< virtual governor [p.u.*s]
    double delta_e_vsm = 0.0; ///< total, delta_e_hd + delta_e_gov [p.u.*s]
    double delta_soc = 0.0;   ///< delta_e_vsm / e_nom
    double delta_p_l = 0.0;   ///< disturbance [p.u.]
};

/// Closed-form energies: (d_vsm / ki_sg) dP_L and (kp_vsm / ki_sg) dP_L.
/// Throws DivergenceError when ki_sg == 0.
EnergyReport energy_report(const SgParams& sg, const VsmParams& vsm, const EssParams& ess, double delta_p_l);

/// Same quantities via final-value evaluation of tf_p_hd / s and tf_p_gov / s.
EnergyReport energy_report_via_final_value(const SystemModel& model, const EssParams& ess, double delta_p_l);

struct LoopBandwidths {
    double primary = 0.0;   ///< rad/s
    double secondary = 0.0; ///< rad/s
    double soc = 0.0;       ///< rad/s
};

/// Closed-form loop bandwidths. Throws DegenerateModelError naming the loop
/// whose formula has a non-positive denominator.
LoopBandwidths estimate_bandwidths(const SgParams& sg, const VsmParams& vsm, const EssParams& ess);

inline constexpr double kDefaultSeparationFactor = 2.0;

struct BandwidthReport {
    LoopBandwidths analytic;
    LoopBandwidths measured;
    /// primary / secondary and secondary / soc
    std::pair<double, double> separation_ratios{0.0, 0.0};
    double separation_factor = kDefaultSeparationFactor;
    bool separation_ok = false;
};

/// Analytic bandwidths plus -3 dB frequencies measured on the simplified loop models.
BandwidthReport bandwidth_report(const SgParams& sg, const VsmParams& vsm, const EssParams& ess,
                                 double separation_factor = kDefaultSeparationFactor,
                                 const BandwidthSearch& search = {});

/// Informational: -3 dB frequency of g_f(s)/s on the full model, referenced to
/// its DC gain 1/ki_sg. Not expected to match the simplified estimate exactly.
double full_model_secondary_bandwidth(const SystemModel& model, const BandwidthSearch& search = {});

}  // namespace gfess
