#pragma once

#include "gfess/lti.hpp"

namespace gfess {

/// Synchronous generator with governor lag and secondary (integral) control.
struct SgParams {
    double h_sg = 2.5;   ///< inertia constant [s]
    double d_sg = 0.0;   ///< damping [p.u.]
    double kp_sg = 15.0; ///< governor proportional gain [p.u.]
    double ki_sg = 5.0;  ///< secondary integral gain [p.u./s]
    double t_sg = 0.3;   ///< governor lag time constant [s]

    /// Throws InvalidParameterError naming the offending field.
    void validate() const;
};

/// Virtual synchronous machine control running on the storage converter.
struct VsmParams {
    double h_vsm = 5.0;   ///< virtual inertia [s]
    double d_vsm = 10.0;  ///< virtual damping [p.u.]
    double kp_vsm = 15.0; ///< virtual governor gain [p.u.]
    double t_vsm = 0.3;   ///< lag time constant [s]

    void validate() const;

    /// All gains and inertia zero: the VSM contributes nothing.
    static VsmParams disabled();
};

/// Energy storage and its SoC recovery PI loop.
struct EssParams {
    double e_nom = 6.8;    ///< energy capacity [p.u.*s]
    double soc_ref = 0.5;
    double soc_ini = 0.5;
    double kp_e = 0.4;     ///< recovery proportional gain [p.u.]
    double ki_e = 0.002;   ///< recovery integral gain [p.u./s]
    double p_rating = 1.0; ///< power rating [p.u.], used only when saturation is enabled

    void validate() const;
};

inline constexpr double kTable1BaseFrequencyHz = 60.0;

/**
 * Load-to-frequency and load-to-power transfer functions of the combined
 * SG + VSM system. For a load increase dP_L the frequency deviation is
 * -g_f * dP_L; every component power is positive when injected into the grid.
 *
 * All four transfer functions share the same denominator polynomial, so
 * tf_p_sg + tf_p_hd + tf_p_gov == 1 holds structurally.
 */
struct SystemModel {
    RationalTransferFunction g_f;
    RationalTransferFunction tf_p_sg;
    RationalTransferFunction tf_p_hd;
    RationalTransferFunction tf_p_gov;
    SgParams sg;
    VsmParams vsm;
    double base_frequency_hz;
};

SystemModel build_system(const SgParams& sg, const VsmParams& vsm,
                         double base_frequency_hz = kTable1BaseFrequencyHz);

/// First-order primary-control loop obtained by freezing the governor lags:
/// pole at (kp_sg + kp_vsm + d_sg + d_vsm) / (h_sg + h_vsm), unit DC gain.
RationalTransferFunction simplified_primary_model(const SgParams& sg, const VsmParams& vsm);

/// First-order secondary loop: pole at ki_sg / (kp_sg + kp_vsm + d_sg + d_vsm).
RationalTransferFunction simplified_secondary_model(const SgParams& sg, const VsmParams& vsm);

/// Proportional SoC loop around the storage integrator: pole at kp_e / e_nom.
RationalTransferFunction simplified_soc_model(const EssParams& ess);

}  // namespace gfess
