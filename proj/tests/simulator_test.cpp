#include <cmath>

#include "doctest.h"
#include "gfess/analysis.hpp"
#include "gfess/lti.hpp"
#include "gfess/errors.hpp"
#include "gfess/simulator.hpp"

using namespace gfess;

namespace {

Scenario short_scenario(double duration = 40.0) {
    Scenario s;
    s.duration_s = duration;
    s.step_time_s = 1.0;
    return s;
}

}  // namespace

TEST_CASE("derivative at equilibrium is zero") {
    Scenario s;
    const SimulationState dx = derivative(SimulationState{}, 0.0, s);
    CHECK(dx.delta_f == 0.0);
    CHECK(dx.p_gov_sg_lag == 0.0);
    CHECK(dx.z_sec == 0.0);
    CHECK(dx.p_vsm_lag == 0.0);
    CHECK(dx.e_discharged == 0.0);
    CHECK(dx.z_rec == 0.0);
}

TEST_CASE("derivative at the step instant") {
    Scenario s;
    const SimulationState dx = derivative(SimulationState{}, s.step_time_s, s);
    CHECK(dx.delta_f == doctest::Approx(-0.05));
    // Before the step nothing moves.
    CHECK(derivative(SimulationState{}, s.step_time_s - 1e-9, s).delta_f == 0.0);
}

TEST_CASE("derivative in the recovery-only regime") {
    Scenario s;
    SimulationState x;
    x.e_discharged = 0.05 * s.ess.e_nom; // SoC 0.45
    x.p_vsm_lag = -0.02;                 // lag settled on the recovery command
    x.p_gov_sg_lag = 0.02;               // SG covers it, frequency flat
    const Signals sig = evaluate_signals(x, 0.0, s);
    CHECK(sig.soc == doctest::Approx(0.45));
    CHECK(sig.p_rec == doctest::Approx(-0.02));
    CHECK(sig.d_delta_f == doctest::Approx(0.0));

    const SimulationState dx = derivative(x, 0.0, s);
    const double dsoc_dt = -dx.e_discharged / s.ess.e_nom;
    CHECK(dsoc_dt == doctest::Approx(0.02 / 6.8));
    CHECK(dx.p_vsm_lag == doctest::Approx(0.0));
    CHECK(dx.z_rec == doctest::Approx(0.002 * 0.05));

    s.recovery_enabled = false;
    CHECK(evaluate_signals(x, 0.0, s).p_rec == 0.0);
    CHECK(derivative(x, 0.0, s).z_rec == 0.0);
}

TEST_CASE("compute_metrics") {
    TimeSeries ts;
    for (int i = 0; i <= 100; ++i) {
        ts.time_s.push_back(i * 0.1);
        ts.frequency_hz.push_back(60.0);
        ts.soc.push_back(0.5);
    }
    Metrics m = compute_metrics(ts, MetricOptions{.step_time_s = 2.0, .soc_ref = 0.5});
    CHECK(m.nadir_hz == 60.0);
    CHECK(m.nadir_time_s == 0.0);
    CHECK(m.freq_steady_hz == 60.0);
    REQUIRE(m.soc_settling_time_s.has_value());
    CHECK(*m.soc_settling_time_s == 2.0);

    SUBCASE("never re-enters the band") {
        ts.soc.back() = 0.4;
        m = compute_metrics(ts, MetricOptions{.step_time_s = 2.0, .soc_ref = 0.5});
        CHECK_FALSE(m.soc_settling_time_s.has_value());
        CHECK(m.soc_min == 0.4);
        CHECK(m.soc_final == 0.4);
    }
    SUBCASE("settles after an excursion") {
        ts.soc[50] = 0.49;
        ts.frequency_hz[30] = 59.0;
        m = compute_metrics(ts, MetricOptions{.step_time_s = 2.0, .soc_ref = 0.5});
        CHECK(*m.soc_settling_time_s == doctest::Approx(5.1));
        CHECK(m.nadir_hz == 59.0);
        CHECK(m.nadir_time_s == doctest::Approx(3.0));
    }
    SUBCASE("steady frequency averages the trailing 5 percent") {
        for (std::size_t i = 95; i <= 100; ++i) {
            ts.frequency_hz[i] = 61.0;
        }
        m = compute_metrics(ts, MetricOptions{});
        CHECK(m.freq_steady_hz == doctest::Approx(61.0));
    }
    CHECK_THROWS_AS(compute_metrics(TimeSeries{}, MetricOptions{}), InvalidParameterError);
}

TEST_CASE("run produces consistent series") {
    Scenario s = short_scenario();
    const SimulationResult r = run(s);
    const auto n = static_cast<std::size_t>(std::floor(s.duration_s / (s.dt_s * s.decimation))) + 1;
    CHECK(r.series.size() == n);
    CHECK(r.series.soc.size() == n);
    CHECK(r.series.p_ess.size() == n);
    CHECK(r.series.time_s.back() == doctest::Approx(s.duration_s));
    CHECK(r.metrics.max_power_balance_residual < 1e-6);
    CHECK(r.metrics.nadir_hz < 60.0);
    CHECK(r.metrics.nadir_time_s > s.step_time_s);
    CHECK(r.warnings.empty());
    for (std::size_t i = 0; i < r.series.size(); ++i) {
        const double load = s.load_at(r.series.time_s[i]);
        CHECK(std::abs(r.series.p_sg_total[i] + r.series.p_ess[i] - load) < 1e-9);
    }
}

TEST_CASE("zero disturbance leaves everything at rest") {
    Scenario s = short_scenario(20.0);
    s.delta_p_l = 0.0;
    const SimulationResult r = run(s);
    for (std::size_t i = 0; i < r.series.size(); ++i) {
        CHECK(r.series.p_sg_total[i] == 0.0);
        CHECK(r.series.p_ess[i] == 0.0);
        CHECK(r.series.p_hd[i] == 0.0);
        CHECK(r.series.soc[i] == 0.5);
        CHECK(r.series.frequency_hz[i] == 60.0);
    }
}

TEST_CASE("responses scale linearly with the disturbance") {
    Scenario full = short_scenario(30.0);
    full.recovery_enabled = false;
    Scenario half = full;
    half.delta_p_l = full.delta_p_l / 2.0;
    const SimulationResult a = run(full);
    const SimulationResult b = run(half);
    REQUIRE(a.series.size() == b.series.size());
    const auto near_half = [](double big, double small) {
        return std::abs(small - 0.5 * big) <= 1e-9 * std::max(std::abs(big), 1e-12);
    };
    for (std::size_t i = 0; i < a.series.size(); ++i) {
        CHECK(near_half(a.series.p_ess[i], b.series.p_ess[i]));
        CHECK(near_half(a.series.p_sg_total[i], b.series.p_sg_total[i]));
        CHECK(near_half(a.series.frequency_hz[i] - 60.0, b.series.frequency_hz[i] - 60.0));
        CHECK(near_half(a.series.soc[i] - 0.5, b.series.soc[i] - 0.5));
    }
}

TEST_CASE("SG-only scenario has no storage activity") {
    Scenario s = short_scenario();
    s.vsm.reset();
    const SimulationResult r = run(s);
    CHECK(r.metrics.soc_final == 0.5);
    for (double p : r.series.p_ess) {
        CHECK(p == 0.0);
    }
    CHECK(r.metrics.nadir_hz < 59.0);
}

TEST_CASE("saturation caps storage power and keeps the balance") {
    Scenario s = short_scenario(20.0);
    s.saturation_enabled = true;
    s.ess.p_rating = 0.1;
    const SimulationResult r = run(s);
    for (double p : r.series.p_ess) {
        CHECK(std::abs(p) <= 0.1 + 1e-12);
    }
    CHECK(r.metrics.max_power_balance_residual < 1e-6);
    const SimulationResult free = run(short_scenario(20.0));
    CHECK(r.metrics.nadir_hz < free.metrics.nadir_hz);
}

TEST_CASE("run diagnostics") {
    Scenario s = short_scenario(5.0);
    s.dt_s = 0.01;
    CHECK(run(s).warnings.empty());
    s.sg.t_sg = 0.05;
    CHECK_FALSE(run(s).warnings.empty());

    s.sg.t_sg = 1e-5;
    CHECK_THROWS_AS(run(s), NonFiniteStateError);

    Scenario bad = short_scenario();
    bad.dt_s = 0.02;
    CHECK_THROWS_AS(run(bad), InvalidParameterError);
    bad = short_scenario();
    bad.duration_s = 0.5;
    CHECK_THROWS_AS(run(bad), InvalidParameterError);
    bad = short_scenario();
    bad.delta_p_l = 3.0;
    CHECK_THROWS_AS(run(bad), InvalidParameterError);
}

TEST_CASE("final-value energies agree with time-domain integration of component powers") {
    Scenario s;
    s.recovery_enabled = false;
    s.duration_s = 300.0;
    s.decimation = 1;
    const SimulationResult r = run(s);
    const auto trapezoid = [&](const std::vector<double>& p) {
        double acc = 0.0;
        for (std::size_t i = 1; i < p.size(); ++i) {
            acc += 0.5 * (p[i] + p[i - 1]) * (r.series.time_s[i] - r.series.time_s[i - 1]);
        }
        return acc;
    };
    const SystemModel m = build_system(s.sg, *s.vsm);
    const double e_hd = final_value_of_step_response(m.tf_p_hd.divided_by_s(), s.delta_p_l);
    const double e_gov = final_value_of_step_response(m.tf_p_gov.divided_by_s(), s.delta_p_l);
    CHECK(trapezoid(r.series.p_hd) == doctest::Approx(e_hd).epsilon(0.005));
    CHECK(trapezoid(r.series.p_gov_vsm) == doctest::Approx(e_gov).epsilon(0.005));
}

TEST_CASE("secondary control restores nominal frequency") {
    Scenario sg_only;
    sg_only.vsm.reset();
    sg_only.duration_s = 60.0;
    Scenario no_recovery;
    no_recovery.recovery_enabled = false;
    no_recovery.duration_s = 300.0;
    Scenario with_recovery;
    with_recovery.duration_s = 400.0;
    for (const Scenario& s : {sg_only, no_recovery, with_recovery}) {
        CHECK(run(s).metrics.freq_steady_hz == doctest::Approx(60.0).epsilon(0.005 / 60.0));
    }
}

TEST_CASE("without recovery the SoC settles at the analytic drop") {
    Scenario s;
    s.recovery_enabled = false;
    s.duration_s = 300.0;
    const double drop = s.ess.soc_ini - run(s).metrics.soc_final;
    const double analytic = energy_report(s.sg, *s.vsm, s.ess, s.delta_p_l).delta_soc;
    CHECK(drop == doctest::Approx(analytic).epsilon(0.01));
}
