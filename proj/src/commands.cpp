#include "gfess/commands.hpp"

#include <cmath>
#include <fstream>
#include <future>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "gfess/analysis.hpp"
#include "gfess/errors.hpp"
#include "gfess/lti.hpp"
#include "gfess/simulator.hpp"

namespace gfess::cli {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr double kEnergyAgreementTolerance = 1e-9;

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

json metrics_json(const Metrics& m) {
    return json{
        {"nadir_hz", m.nadir_hz},
        {"nadir_time_s", m.nadir_time_s},
        {"freq_steady_hz", m.freq_steady_hz},
        {"soc_min", m.soc_min},
        {"soc_final", m.soc_final},
        {"soc_settling_time_s", optional_number(m.soc_settling_time_s)},
        {"max_power_balance_residual", m.max_power_balance_residual},
    };
}

json energy_json(const EnergyReport& r) {
    return json{
        {"delta_e_hd_pu_s", r.delta_e_hd},
        {"delta_e_gov_pu_s", r.delta_e_gov},
        {"delta_e_vsm_pu_s", r.delta_e_vsm},
        {"delta_soc", r.delta_soc},
        {"delta_p_l_pu", r.delta_p_l},
    };
}

json bandwidths_json(const LoopBandwidths& b) {
    return json{{"primary_rad_s", b.primary}, {"secondary_rad_s", b.secondary}, {"soc_rad_s", b.soc}};
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot write " + path.string());
    }
    out << text;
}

void write_timeseries(const fs::path& path, const TimeSeries& s) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot write " + path.string());
    }
    out << std::setprecision(17);
    out << "time_s,freq_hz,p_sg_pu,p_hd_pu,p_gov_vsm_pu,p_rec_pu,p_ess_pu,soc\n";
    const auto v = [](double x) { return x + 0.0; };  // prints -0 as 0
    for (std::size_t i = 0; i < s.size(); ++i) {
        out << s.time_s[i] << ',' << s.frequency_hz[i] << ',' << v(s.p_sg_total[i]) << ',' << v(s.p_hd[i]) << ','
            << v(s.p_gov_vsm[i]) << ',' << v(s.p_rec[i]) << ',' << v(s.p_ess[i]) << ',' << s.soc[i] << '\n';
    }
}

double relative_difference(double a, double b) {
    const double scale = std::max({std::abs(a), std::abs(b), 1e-300});
    return a == b ? 0.0 : std::abs(a - b) / scale;
}

/// Runs `body`, mapping configuration problems to exit code 2.
template <typename Body>
int guarded(std::ostream& err, Body&& body) {
    try {
        return body();
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return kConfigError;
    } catch (const InvalidParameterError& e) {
        err << "config error: invalid parameter " << e.what() << '\n';
        return kConfigError;
    }
}

}  // namespace

ScenarioConfig resolve_config(const ConfigSource& source) {
    ScenarioConfig config;
    if (source.path) {
        config = load_config(*source.path);
    } else if (auto profile = builtin_profile(source.profile)) {
        config = *profile;
    } else {
        throw ConfigError("", std::nullopt, "unknown profile '" + source.profile + "'");
    }
    for (const auto& item : source.overrides) {
        const auto eq = item.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(item, std::nullopt, "override must look like key=value");
        }
        const std::string key = item.substr(0, eq);
        if (!resolve_key(key)) {
            throw ConfigError(key, std::nullopt, "unknown key");
        }
        set_field(config, key, item.substr(eq + 1));
    }
    return config;
}

int cmd_simulate(const SimulateOptions& options, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        ScenarioConfig config = resolve_config(options.config);
        if (options.no_vsm) {
            config.vsm_enabled = false;
        }
        if (options.no_recovery) {
            config.recovery_enabled = false;
        }
        if (options.decimation) {
            config.decimation = *options.decimation;
        }
        const Scenario scenario = config.to_scenario();
        scenario.validate();

        SimulationResult result;
        try {
            result = run(scenario);
        } catch (const NonFiniteStateError& e) {
            err << "integration error: " << e.what() << '\n';
            return static_cast<int>(kIntegrationError);
        }
        for (const auto& w : result.warnings) {
            err << "warning: " << w << '\n';
        }

        fs::create_directories(options.output_dir);
        write_timeseries(options.output_dir / "timeseries.csv", result.series);
        write_text(options.output_dir / "metrics.json", metrics_json(result.metrics).dump(2) + "\n");
        out << "wrote " << result.series.size() << " rows to " << (options.output_dir / "timeseries.csv").string()
            << '\n';
        return static_cast<int>(kOk);
    });
}

int cmd_energy(const ConfigSource& source, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const ScenarioConfig config = resolve_config(source);
        const VsmParams vsm = config.effective_vsm();
        try {
            const EnergyReport closed = energy_report(config.sg, vsm, config.ess, config.delta_p_l);
            const SystemModel model = build_system(config.sg, vsm, config.base_frequency_hz);
            const EnergyReport via_fv = energy_report_via_final_value(model, config.ess, config.delta_p_l);

            const double diff = std::max({relative_difference(closed.delta_e_hd, via_fv.delta_e_hd),
                                          relative_difference(closed.delta_e_gov, via_fv.delta_e_gov),
                                          relative_difference(closed.delta_e_vsm, via_fv.delta_e_vsm)});
            json doc = energy_json(closed);
            doc["final_value"] = energy_json(via_fv);
            doc["agreement"] = json{{"max_relative_difference", diff},
                                    {"tolerance", kEnergyAgreementTolerance},
                                    {"agree", diff <= kEnergyAgreementTolerance}};
            out << doc.dump(2) << '\n';
            return static_cast<int>(kOk);
        } catch (const DivergenceError&) {
            err << "divergence: steady-state storage energy is (d_vsm + kp_vsm) * delta_p_l / ki_sg, "
                   "which is unbounded for ki_sg = 0\n";
            return static_cast<int>(kDivergence);
        } catch (const InstabilityError& e) {
            err << "unstable system: " << e.what() << '\n';
            return static_cast<int>(kDivergence);
        }
    });
}

int cmd_bandwidth(const BandwidthOptions& options, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        if (!(options.separation_factor >= 1.0)) {
            throw ConfigError("separation-factor", std::nullopt, "must be >= 1");
        }
        const ScenarioConfig config = resolve_config(options.config);
        const VsmParams vsm = config.effective_vsm();
        config.sg.validate();
        vsm.validate();
        config.ess.validate();
        try {
            const BandwidthReport r = bandwidth_report(config.sg, vsm, config.ess, options.separation_factor);

            json full_secondary = nullptr;
            try {
                full_secondary = full_model_secondary_bandwidth(build_system(config.sg, vsm));
            } catch (const Error&) {
                // informational only
            }

            json doc{
                {"analytic", bandwidths_json(r.analytic)},
                {"measured", bandwidths_json(r.measured)},
                {"separation_factor", r.separation_factor},
                {"separation_ratios",
                 {{"primary_to_secondary", r.separation_ratios.first},
                  {"secondary_to_soc", r.separation_ratios.second}}},
                {"separation_ok", r.separation_ok},
                {"ordering_ok", r.analytic.soc < r.analytic.secondary && r.analytic.secondary < r.analytic.primary},
                {"full_model_secondary_rad_s", full_secondary},
                {"third_control", nullptr},
            };
            if (options.third_control_bw) {
                doc["third_control"] = json{{"bandwidth_rad_s", *options.third_control_bw},
                                            {"soc_above_third", r.analytic.soc > *options.third_control_bw}};
            }
            if (!r.separation_ok) {
                err << "warning: loop bandwidths are not separated by a factor of " << r.separation_factor << '\n';
            }
            out << doc.dump(2) << '\n';
            return static_cast<int>(kOk);
        } catch (const DegenerateModelError& e) {
            err << "degenerate model: " << e.what() << '\n';
            return static_cast<int>(kDegenerateModel);
        } catch (const NoCrossingError& e) {
            err << "degenerate model: " << e.what() << '\n';
            return static_cast<int>(kDegenerateModel);
        }
    });
}

int cmd_bode(const BodeOptions& options, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        if (!(options.omega_lo > 0.0 && options.omega_hi > options.omega_lo && std::isfinite(options.omega_hi))) {
            throw ConfigError("omega-range", std::nullopt, "need 0 < lo < hi");
        }
        if (options.points < 2) {
            throw ConfigError("points", std::nullopt, "need at least 2 points");
        }
        const ScenarioConfig config = resolve_config(options.config);
        const VsmParams vsm = config.effective_vsm();

        std::optional<RationalTransferFunction> tf;
        try {
            switch (options.which) {
            case BodeTarget::kGf:
                tf = build_system(config.sg, vsm, config.base_frequency_hz).g_f;
                break;
            case BodeTarget::kPrimary:
                tf = simplified_primary_model(config.sg, vsm);
                break;
            case BodeTarget::kSecondary:
                tf = simplified_secondary_model(config.sg, vsm);
                break;
            case BodeTarget::kSoc:
                tf = simplified_soc_model(config.ess);
                break;
            }
        } catch (const DegenerateModelError& e) {
            err << "degenerate model: " << e.what() << '\n';
            return static_cast<int>(kDegenerateModel);
        }

        fs::create_directories(options.output_dir);
        const fs::path path = options.output_dir / "bode.csv";
        std::ofstream csv(path);
        if (!csv) {
            throw std::runtime_error("cannot write " + path.string());
        }
        csv << std::setprecision(17) << "omega_rad_s,magnitude_db,phase_deg\n";
        const double log_lo = std::log10(options.omega_lo);
        const double log_step = (std::log10(options.omega_hi) - log_lo) / (options.points - 1);
        int pole_rows = 0;
        for (int i = 0; i < options.points; ++i) {
            const double omega =
                i == options.points - 1 ? options.omega_hi : std::pow(10.0, log_lo + i * log_step);
            try {
                const double mag = magnitude_db(*tf, omega);
                const double phase = phase_deg(*tf, omega);
                csv << omega << ',' << mag << ',' << phase << '\n';
            } catch (const PoleHitError&) {
                csv << omega << ",,\n";
                ++pole_rows;
            }
        }
        if (pole_rows > 0) {
            err << "warning: " << pole_rows << " row(s) fall on a pole and have blank magnitude\n";
        }
        out << "wrote " << options.points << " rows to " << path.string() << '\n';
        return static_cast<int>(kOk);
    });
}

int cmd_sweep(const SweepOptions& options, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const auto key = resolve_key(options.param);
        if (!key || !is_numeric_key(*key)) {
            throw ConfigError(options.param, std::nullopt, "not a known numeric parameter");
        }
        if (options.values.empty()) {
            throw ConfigError("values", std::nullopt, "need at least one value");
        }
        const ScenarioConfig base = resolve_config(options.config);

        std::vector<ScenarioConfig> configs;
        for (double v : options.values) {
            ScenarioConfig c = base;
            set_numeric_field(c, *key, v);
            c.to_scenario().validate();
            configs.push_back(c);
        }
        base.to_scenario().validate();

        const auto launch = [](const ScenarioConfig& c) {
            return std::async(std::launch::async, [s = c.to_scenario()] { return run(s); });
        };
        auto base_future = launch(base);
        std::vector<std::future<SimulationResult>> futures;
        for (const auto& c : configs) {
            futures.push_back(launch(c));
        }

        std::vector<SimulationResult> results;
        SimulationResult base_result;
        try {
            base_result = base_future.get();
            for (auto& f : futures) {
                results.push_back(f.get());
            }
        } catch (const NonFiniteStateError& e) {
            err << "integration error: " << e.what() << '\n';
            return static_cast<int>(kIntegrationError);
        }

        fs::create_directories(options.output_dir);
        std::ostringstream summary;
        summary << std::setprecision(17);
        summary << "value,nadir_hz,soc_settling_time_s,nadir_change_vs_base_hz,nadir_degraded,separation_ok\n";
        for (std::size_t i = 0; i < results.size(); ++i) {
            const Metrics& m = results[i].metrics;
            std::ostringstream dir;
            dir << "run_" << std::setw(3) << std::setfill('0') << i;
            const fs::path run_dir = options.output_dir / dir.str();
            fs::create_directories(run_dir);
            json doc = metrics_json(m);
            write_text(run_dir / "metrics.json", doc.dump(2) + "\n");

            const double change = m.nadir_hz - base_result.metrics.nadir_hz;
            std::string separation;
            try {
                const auto& c = configs[i];
                separation = bandwidth_report(c.sg, c.effective_vsm(), c.ess).separation_ok ? "true" : "false";
            } catch (const Error&) {
                separation = "";
            }
            summary << options.values[i] << ',' << m.nadir_hz << ',';
            if (m.soc_settling_time_s) {
                summary << *m.soc_settling_time_s;
            }
            summary << ',' << change << ',' << (change < -1e-4 ? "true" : "false") << ',' << separation << '\n';
        }
        write_text(options.output_dir / "sweep_summary.csv", summary.str());
        out << "ran " << results.size() << " simulation(s); summary in "
            << (options.output_dir / "sweep_summary.csv").string() << '\n';
        return static_cast<int>(kOk);
    });
}

int cmd_profile(const ConfigSource& source, const std::optional<fs::path>& path, std::ostream& out,
                std::ostream& err) {
    return guarded(err, [&] {
        const std::string text = to_json(resolve_config(source));
        if (path) {
            write_text(*path, text);
        } else {
            out << text;
        }
        return static_cast<int>(kOk);
    });
}

std::vector<double> parse_value_list(const std::string& text) {
    std::vector<double> values;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(item, &used);
        } catch (const std::exception&) {
            throw ConfigError("values", std::nullopt, "cannot parse '" + item + "'");
        }
        if (item.find_first_not_of(" \t", used) != std::string::npos || !std::isfinite(v)) {
            throw ConfigError("values", std::nullopt, "cannot parse '" + item + "'");
        }
        values.push_back(v);
    }
    return values;
}

std::pair<double, double> parse_range(const std::string& text) {
    const auto colon = text.find(':');
    if (colon == std::string::npos) {
        throw ConfigError("omega-range", std::nullopt, "expected lo:hi");
    }
    const auto lo = parse_value_list(text.substr(0, colon));
    const auto hi = parse_value_list(text.substr(colon + 1));
    if (lo.size() != 1 || hi.size() != 1) {
        throw ConfigError("omega-range", std::nullopt, "expected lo:hi");
    }
    return {lo[0], hi[0]};
}

}  // namespace gfess::cli
