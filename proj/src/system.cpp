#include "gfess/system.hpp"

#include <cmath>
#include <sstream>

#include "gfess/errors.hpp"

namespace gfess {

namespace {

void require(bool ok, const char* field, const char* rule, double value) {
    if (!ok || !std::isfinite(value)) {
        std::ostringstream msg;
        msg << "must satisfy " << rule << " (got " << value << ")";
        throw InvalidParameterError(field, msg.str());
    }
}

double primary_gain_sum(const SgParams& sg, const VsmParams& vsm) {
    return sg.kp_sg + vsm.kp_vsm + sg.d_sg + vsm.d_vsm;
}

}  // namespace

void SgParams::validate() const {
    require(h_sg > 0.0, "h_sg", "> 0", h_sg);
    require(d_sg >= 0.0, "d_sg", ">= 0", d_sg);
    require(kp_sg >= 0.0, "kp_sg", ">= 0", kp_sg);
    require(ki_sg >= 0.0, "ki_sg", ">= 0", ki_sg);
    require(t_sg > 0.0, "t_sg", "> 0", t_sg);
}

void VsmParams::validate() const {
    require(h_vsm >= 0.0, "h_vsm", ">= 0", h_vsm);
    require(d_vsm >= 0.0, "d_vsm", ">= 0", d_vsm);
    require(kp_vsm >= 0.0, "kp_vsm", ">= 0", kp_vsm);
    require(t_vsm > 0.0, "t_vsm", "> 0", t_vsm);
}

VsmParams VsmParams::disabled() {
    VsmParams v;
    v.h_vsm = 0.0;
    v.d_vsm = 0.0;
    v.kp_vsm = 0.0;
    return v;
}

void EssParams::validate() const {
    require(e_nom > 0.0, "e_nom", "> 0", e_nom);
    require(soc_ref >= 0.0 && soc_ref <= 1.0, "soc_ref", "0 <= soc_ref <= 1", soc_ref);
    require(soc_ini >= 0.0 && soc_ini <= 1.0, "soc_ini", "0 <= soc_ini <= 1", soc_ini);
    require(kp_e >= 0.0, "kp_e", ">= 0", kp_e);
    require(ki_e >= 0.0, "ki_e", ">= 0", ki_e);
    require(p_rating > 0.0, "p_rating", "> 0", p_rating);
}

SystemModel build_system(const SgParams& sg, const VsmParams& vsm, double base_frequency_hz) {
    sg.validate();
    vsm.validate();
    require(base_frequency_hz > 0.0, "base_frequency", "> 0", base_frequency_hz);

    const Polynomial s = Polynomial::s();
    const Polynomial sg_lag = Polynomial::linear(1.0, sg.t_sg);    // T_SG s + 1
    const Polynomial vsm_lag = Polynomial::linear(1.0, vsm.t_vsm); // T_VSM s + 1
    const Polynomial lags_s = sg_lag * vsm_lag * s;

    // Swing, SG governor + secondary, and VSM governor terms of the closed-loop
    // characteristic polynomial. Each one is also the numerator of the matching
    // load-to-power transfer function.
    const Polynomial sg_swing = Polynomial::linear(sg.d_sg, sg.h_sg) * lags_s;
    const Polynomial sg_governor = Polynomial::linear(sg.ki_sg, sg.kp_sg) * vsm_lag;
    const Polynomial vsm_hd = Polynomial::linear(vsm.d_vsm, vsm.h_vsm) * lags_s;
    const Polynomial vsm_governor = vsm.kp_vsm * (s * sg_lag);

    const Polynomial characteristic = sg_swing + vsm_hd + sg_governor + vsm_governor;
    if (characteristic.is_zero()) {
        throw InvalidParameterError("h_sg", "characteristic polynomial vanishes");
    }

    return SystemModel{
        .g_f = RationalTransferFunction(lags_s, characteristic),
        .tf_p_sg = RationalTransferFunction(sg_swing + sg_governor, characteristic),
        .tf_p_hd = RationalTransferFunction(vsm_hd, characteristic),
        .tf_p_gov = RationalTransferFunction(vsm_governor, characteristic),
        .sg = sg,
        .vsm = vsm,
        .base_frequency_hz = base_frequency_hz,
    };
}

RationalTransferFunction simplified_primary_model(const SgParams& sg, const VsmParams& vsm) {
    const double inertia = sg.h_sg + vsm.h_vsm;
    if (!(inertia > 0.0)) {
        throw DegenerateModelError("primary model: total inertia h_sg + h_vsm must be positive");
    }
    const double gains = primary_gain_sum(sg, vsm);
    if (!(gains > 0.0)) {
        throw DegenerateModelError("primary model: kp_sg + kp_vsm + d_sg + d_vsm must be positive");
    }
    return RationalTransferFunction::first_order(gains / inertia);
}

RationalTransferFunction simplified_secondary_model(const SgParams& sg, const VsmParams& vsm) {
    if (!(sg.ki_sg > 0.0)) {
        throw DegenerateModelError("secondary model: ki_sg must be positive");
    }
    const double gains = primary_gain_sum(sg, vsm);
    if (!(gains > 0.0)) {
        throw DegenerateModelError("secondary model: kp_sg + kp_vsm + d_sg + d_vsm must be positive");
    }
    return RationalTransferFunction::first_order(sg.ki_sg / gains);
}

RationalTransferFunction simplified_soc_model(const EssParams& ess) {
    ess.validate();
    if (!(ess.kp_e > 0.0)) {
        throw DegenerateModelError("SoC model: kp_e must be positive");
    }
    return RationalTransferFunction::first_order(ess.kp_e / ess.e_nom);
}

}  // namespace gfess
