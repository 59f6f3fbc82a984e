#include "gfess/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "gfess/errors.hpp"

namespace gfess {

void Scenario::validate() const {
    sg.validate();
    if (vsm) {
        vsm->validate();
    }
    ess.validate();
    if (!(dt_s > 0.0 && dt_s <= 0.01)) {
        throw InvalidParameterError("dt", "must satisfy 0 < dt <= 0.01 s");
    }
    if (!(step_time_s >= 0.0)) {
        throw InvalidParameterError("step_time", "must be >= 0");
    }
    if (!(duration_s > step_time_s) || !std::isfinite(duration_s)) {
        throw InvalidParameterError("duration", "must exceed step_time");
    }
    if (!(std::abs(delta_p_l) <= 2.0)) {
        throw InvalidParameterError("delta_p_l", "must satisfy |delta_p_l| <= 2 p.u.");
    }
    if (!(base_frequency_hz > 0.0) || !std::isfinite(base_frequency_hz)) {
        throw InvalidParameterError("base_frequency", "must be positive");
    }
    if (decimation < 1) {
        throw InvalidParameterError("decimation", "must be >= 1");
    }
}

bool SimulationState::all_finite() const noexcept {
    return std::isfinite(delta_f) && std::isfinite(p_gov_sg_lag) && std::isfinite(z_sec) &&
           std::isfinite(p_vsm_lag) && std::isfinite(e_discharged) && std::isfinite(z_rec);
}

SimulationState operator+(const SimulationState& a, const SimulationState& b) {
    return {a.delta_f + b.delta_f,     a.p_gov_sg_lag + b.p_gov_sg_lag, a.z_sec + b.z_sec,
            a.p_vsm_lag + b.p_vsm_lag, a.e_discharged + b.e_discharged, a.z_rec + b.z_rec};
}

SimulationState operator*(double k, const SimulationState& a) {
    return {k * a.delta_f,   k * a.p_gov_sg_lag, k * a.z_sec,
            k * a.p_vsm_lag, k * a.e_discharged, k * a.z_rec};
}

namespace {

const VsmParams& vsm_or_disabled(const Scenario& scenario) {
    static const VsmParams disabled = VsmParams::disabled();
    return scenario.vsm ? *scenario.vsm : disabled;
}

bool recovery_active(const Scenario& scenario) {
    return scenario.recovery_enabled && scenario.vsm.has_value();
}

}  // namespace

Signals evaluate_signals(const SimulationState& x, double load, const Scenario& scenario) {
    const SgParams& sg = scenario.sg;
    const VsmParams& vsm = vsm_or_disabled(scenario);
    const EssParams& ess = scenario.ess;

    Signals out;
    out.load = load;
    out.soc = ess.soc_ini - x.e_discharged / ess.e_nom;
    if (recovery_active(scenario)) {
        const double error = ess.soc_ref - out.soc;
        out.p_rec = -(ess.kp_e * error + x.z_rec);
    }

    const double inertia = sg.h_sg + vsm.h_vsm;
    const double damping = sg.d_sg + vsm.d_vsm;
    out.d_delta_f = (x.p_gov_sg_lag + x.p_vsm_lag - damping * x.delta_f - load) / inertia;
    out.p_hd = -(vsm.h_vsm * out.d_delta_f + vsm.d_vsm * x.delta_f);
    out.p_ess = out.p_hd + x.p_vsm_lag;

    if (scenario.saturation_enabled && scenario.vsm && std::abs(out.p_ess) > ess.p_rating) {
        // The converter delivers only its rating; the SG swing absorbs the rest.
        out.p_ess = std::clamp(out.p_ess, -ess.p_rating, ess.p_rating);
        out.d_delta_f = (x.p_gov_sg_lag + out.p_ess - sg.d_sg * x.delta_f - load) / sg.h_sg;
        out.p_hd = out.p_ess - x.p_vsm_lag;
    }

    out.p_sg_total = x.p_gov_sg_lag - sg.h_sg * out.d_delta_f - sg.d_sg * x.delta_f;
    return out;
}

SimulationState derivative_under_load(const SimulationState& x, double load, const Scenario& scenario) {
    const SgParams& sg = scenario.sg;
    const VsmParams& vsm = vsm_or_disabled(scenario);
    const Signals sig = evaluate_signals(x, load, scenario);

    SimulationState dx;
    dx.delta_f = sig.d_delta_f;
    dx.z_sec = -sg.ki_sg * x.delta_f;
    dx.p_gov_sg_lag = (-sg.kp_sg * x.delta_f + x.z_sec - x.p_gov_sg_lag) / sg.t_sg;
    dx.p_vsm_lag = (-vsm.kp_vsm * x.delta_f + sig.p_rec - x.p_vsm_lag) / vsm.t_vsm;
    dx.e_discharged = sig.p_ess;
    dx.z_rec = recovery_active(scenario) ? scenario.ess.ki_e * (scenario.ess.soc_ref - sig.soc) : 0.0;
    return dx;
}

void TimeSeries::reserve(std::size_t n) {
    for (auto* v : {&time_s, &frequency_hz, &p_sg_total, &p_hd, &p_gov_vsm, &p_rec, &p_ess, &soc}) {
        v->reserve(n);
    }
}

Metrics compute_metrics(const TimeSeries& series, const MetricOptions& options) {
    const std::size_t n = series.time_s.size();
    if (n == 0 || series.frequency_hz.size() != n || series.soc.size() != n) {
        throw InvalidParameterError("series", "metrics need a non-empty series with matching lengths");
    }
    Metrics m;

    const auto nadir = std::min_element(series.frequency_hz.begin(), series.frequency_hz.end());
    m.nadir_hz = *nadir;
    m.nadir_time_s = series.time_s[static_cast<std::size_t>(nadir - series.frequency_hz.begin())];

    const auto tail = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::ceil(options.steady_fraction * static_cast<double>(n))));
    m.freq_steady_hz =
        std::accumulate(series.frequency_hz.end() - static_cast<std::ptrdiff_t>(tail), series.frequency_hz.end(), 0.0) /
        static_cast<double>(tail);

    m.soc_min = *std::min_element(series.soc.begin(), series.soc.end());
    m.soc_final = series.soc.back();

    const auto outside = [&](double soc) { return !(std::abs(soc - options.soc_ref) < options.soc_band); };
    const auto last_out = std::find_if(series.soc.rbegin(), series.soc.rend(), outside);
    if (last_out == series.soc.rend()) {
        m.soc_settling_time_s = options.step_time_s;
    } else {
        const auto idx = static_cast<std::size_t>(series.soc.rend() - last_out) - 1;
        if (idx + 1 < n) {
            m.soc_settling_time_s = std::max(options.step_time_s, series.time_s[idx + 1]);
        }
    }
    return m;
}

SimulationResult run(const Scenario& scenario) {
    scenario.validate();
    SimulationResult result;

    const double dt = scenario.dt_s;
    if (dt > scenario.sg.t_sg / 10.0 || (scenario.vsm && dt > scenario.vsm->t_vsm / 10.0)) {
        std::ostringstream msg;
        msg << "step size " << dt << " s exceeds a tenth of the fastest lag time constant";
        result.warnings.push_back(msg.str());
    }

    const auto steps = static_cast<std::size_t>(std::floor(scenario.duration_s / dt + 1e-9));
    const auto decimation = static_cast<std::size_t>(scenario.decimation);
    const double f0 = scenario.base_frequency_hz;

    TimeSeries trace;  // full resolution, metrics only
    trace.time_s.reserve(steps + 1);
    trace.frequency_hz.reserve(steps + 1);
    trace.soc.reserve(steps + 1);
    result.series.reserve(steps / decimation + 1);

    double max_residual = 0.0;
    SimulationState x;
    for (std::size_t k = 0;; ++k) {
        const double t = static_cast<double>(k) * dt;
        const Signals sig = evaluate_signals(x, scenario.load_at(t), scenario);
        const double freq = f0 * (1.0 + x.delta_f);
        max_residual = std::max(max_residual, std::abs(sig.p_sg_total + sig.p_ess - sig.load));

        trace.time_s.push_back(t);
        trace.frequency_hz.push_back(freq);
        trace.soc.push_back(sig.soc);
        if (k % decimation == 0) {
            auto& s = result.series;
            s.time_s.push_back(t);
            s.frequency_hz.push_back(freq);
            s.p_sg_total.push_back(sig.p_sg_total);
            s.p_hd.push_back(sig.p_hd);
            s.p_gov_vsm.push_back(x.p_vsm_lag);
            s.p_rec.push_back(sig.p_rec);
            s.p_ess.push_back(sig.p_ess);
            s.soc.push_back(sig.soc);
        }
        if (k == steps) {
            break;
        }

        // The load is held at its mid-interval value so a step aligned with the
        // grid never lands inside an RK stage.
        const double load = scenario.load_at(t + 0.5 * dt);
        const SimulationState k1 = derivative_under_load(x, load, scenario);
        const SimulationState k2 = derivative_under_load(x + (0.5 * dt) * k1, load, scenario);
        const SimulationState k3 = derivative_under_load(x + (0.5 * dt) * k2, load, scenario);
        const SimulationState k4 = derivative_under_load(x + dt * k3, load, scenario);
        x = x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        if (!x.all_finite()) {
            throw NonFiniteStateError(t + dt, "integration produced a non-finite state");
        }
    }

    result.metrics = compute_metrics(trace, MetricOptions{.step_time_s = scenario.step_time_s,
                                                          .soc_ref = scenario.ess.soc_ref});
    result.metrics.max_power_balance_residual = max_residual;
    return result;
}

}  // namespace gfess
