#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gfess/system.hpp"

namespace gfess {

/// One step-load experiment on the SG + storage system.
struct Scenario {
    SgParams sg;
    /// Absent: no storage converter at all, the SG alone serves the load.
    std::optional<VsmParams> vsm = VsmParams{};
    EssParams ess;
    bool recovery_enabled = true;
    double step_time_s = 10.0;
    double delta_p_l = 0.375; ///< positive = load increase [p.u.]
    double duration_s = 400.0;
    double dt_s = 1e-3;
    double base_frequency_hz = kTable1BaseFrequencyHz;
    bool saturation_enabled = false;
    /// Record every n-th integration step in the output series.
    int decimation = 10;

    void validate() const;
    double load_at(double t) const noexcept { return t >= step_time_s ? delta_p_l : 0.0; }
};

/// Integrator states of the linearized plant and its controllers.
struct SimulationState {
    double delta_f = 0.0;      ///< frequency deviation [p.u.]
    double p_gov_sg_lag = 0.0; ///< SG governor lag output [p.u.]
    double z_sec = 0.0;        ///< SG secondary integrator [p.u.]
    double p_vsm_lag = 0.0;    ///< VSM governor + recovery lag output [p.u.]
    double e_discharged = 0.0; ///< integral of storage power [p.u.*s]
    double z_rec = 0.0;        ///< recovery PI integrator [p.u.]

    bool all_finite() const noexcept;
};

SimulationState operator+(const SimulationState& a, const SimulationState& b);
SimulationState operator*(double k, const SimulationState& a);

/// Algebraic signals that accompany a state at one instant.
struct Signals {
    double load = 0.0;
    double soc = 0.0;
    double p_rec = 0.0;
    double d_delta_f = 0.0; ///< swing right-hand side [p.u./s]
    double p_hd = 0.0;
    double p_ess = 0.0;
    double p_sg_total = 0.0;
};

/// Signals for a state under the given load.
Signals evaluate_signals(const SimulationState& state, double load, const Scenario& scenario);

/// State derivative under an explicit load value.
SimulationState derivative_under_load(const SimulationState& state, double load, const Scenario& scenario);

/// State derivative with the load taken from the scenario's step at time t.
inline SimulationState derivative(const SimulationState& state, double t, const Scenario& scenario) {
    return derivative_under_load(state, scenario.load_at(t), scenario);
}

struct TimeSeries {
    std::vector<double> time_s;
    std::vector<double> frequency_hz;
    std::vector<double> p_sg_total;
    std::vector<double> p_hd;
    std::vector<double> p_gov_vsm;
    std::vector<double> p_rec;
    std::vector<double> p_ess;
    std::vector<double> soc;

    std::size_t size() const noexcept { return time_s.size(); }
    void reserve(std::size_t n);
};

struct Metrics {
    double nadir_hz = 0.0;
    double nadir_time_s = 0.0;
    double freq_steady_hz = 0.0;
    double soc_min = 0.0;
    double soc_final = 0.0;
    std::optional<double> soc_settling_time_s;
    double max_power_balance_residual = 0.0;
};

struct MetricOptions {
    double step_time_s = 0.0;
    double soc_ref = 0.5;
    double soc_band = 0.002;
    /// Fraction of trailing samples averaged for the steady-state frequency.
    double steady_fraction = 0.05;
};

/**
 * Nadir (global minimum of frequency and its time), steady frequency (mean of
 * the trailing 5% of samples), SoC extremes, and the SoC settling time: the
 * first time at or after the step from which every later sample stays within
 * the band around soc_ref. The residual field is left at zero.
 */
Metrics compute_metrics(const TimeSeries& series, const MetricOptions& options);

struct SimulationResult {
    TimeSeries series;
    Metrics metrics;
    std::vector<std::string> warnings;
};

/**
 * Fixed-step classical RK4 from t = 0 to duration. Metrics are computed on
 * every integration step; the returned series keeps every `decimation`-th one.
 * Throws NonFiniteStateError on blow-up.
 */
SimulationResult run(const Scenario& scenario);

}  // namespace gfess
