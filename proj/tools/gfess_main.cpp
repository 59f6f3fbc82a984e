// Command-line front end: simulate, energy, bandwidth, bode, sweep, profile.

#include <iostream>
#include <map>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "gfess/commands.hpp"

namespace {

void add_config_options(CLI::App* cmd, gfess::cli::ConfigSource& source) {
    cmd->add_option("-c,--config", source.path, "Scenario configuration file (flat JSON object)")
        ->check(CLI::ExistingFile);
    cmd->add_option("-p,--profile", source.profile, "Built-in profile used when no --config is given")
        ->capture_default_str();
    cmd->add_option("-s,--set", source.overrides, "Override a configuration key: key=value (repeatable)");
}

}  // namespace

int main(int argc, char** argv) {
    using namespace gfess::cli;

    CLI::App app{"Grid-forming energy storage frequency-control toolkit"};
    app.require_subcommand(1);

    SimulateOptions simulate;
    auto* sim_cmd = app.add_subcommand("simulate", "Run a step-load simulation; writes timeseries.csv and metrics.json");
    add_config_options(sim_cmd, simulate.config);
    sim_cmd->add_option("-o,--output", simulate.output_dir, "Output directory")->capture_default_str();
    sim_cmd->add_flag("--no-vsm", simulate.no_vsm, "Remove the storage converter (SG serves the load alone)");
    sim_cmd->add_flag("--no-recovery", simulate.no_recovery, "Disable SoC recovery control");
    sim_cmd->add_option("--decimation", simulate.decimation, "Record every N-th integration step")
        ->check(CLI::PositiveNumber);

    ConfigSource energy;
    auto* energy_cmd = app.add_subcommand("energy", "Steady-state storage energy per VSM service (JSON)");
    add_config_options(energy_cmd, energy);

    BandwidthOptions bandwidth;
    auto* bw_cmd = app.add_subcommand("bandwidth", "Analytic and measured loop bandwidths (JSON)");
    add_config_options(bw_cmd, bandwidth.config);
    bw_cmd->add_option("--separation-factor", bandwidth.separation_factor, "Required ratio between adjacent loops")
        ->capture_default_str();
    bw_cmd->add_option("--third-control-bw", bandwidth.third_control_bw,
                       "Tertiary-control bandwidth [rad/s] to compare the SoC loop against");

    BodeOptions bode;
    std::string range = "1e-3:1e3";
    auto* bode_cmd = app.add_subcommand("bode", "Frequency response of one transfer function; writes bode.csv");
    add_config_options(bode_cmd, bode.config);
    const std::map<std::string, BodeTarget> targets{{"gf", BodeTarget::kGf},
                                                    {"primary", BodeTarget::kPrimary},
                                                    {"secondary", BodeTarget::kSecondary},
                                                    {"soc", BodeTarget::kSoc}};
    bode_cmd->add_option("-w,--which", bode.which, "gf | primary | secondary | soc")
        ->transform(CLI::CheckedTransformer(targets, CLI::ignore_case));
    bode_cmd->add_option("--omega-range", range, "lo:hi in rad/s")->capture_default_str();
    bode_cmd->add_option("--points", bode.points, "Number of log-spaced frequencies")->capture_default_str();
    bode_cmd->add_option("-o,--output", bode.output_dir, "Output directory")->capture_default_str();

    SweepOptions sweep;
    std::string values;
    auto* sweep_cmd = app.add_subcommand("sweep", "One simulation per parameter value; writes sweep_summary.csv");
    add_config_options(sweep_cmd, sweep.config);
    sweep_cmd->add_option("--param", sweep.param, "Numeric configuration key (unit suffix optional)")->required();
    sweep_cmd->add_option("--values", values, "Comma-separated values")->required();
    sweep_cmd->add_option("-o,--output", sweep.output_dir, "Output directory")->capture_default_str();

    ConfigSource profile;
    std::optional<std::filesystem::path> profile_out;
    auto* profile_cmd = app.add_subcommand("profile", "Print or write the resolved configuration");
    add_config_options(profile_cmd, profile);
    profile_cmd->add_option("-o,--output", profile_out, "Write to this file instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kConfigError;
    }

    try {
        if (*sim_cmd) {
            return cmd_simulate(simulate, std::cout, std::cerr);
        }
        if (*energy_cmd) {
            return cmd_energy(energy, std::cout, std::cerr);
        }
        if (*bw_cmd) {
            return cmd_bandwidth(bandwidth, std::cout, std::cerr);
        }
        if (*bode_cmd) {
            std::tie(bode.omega_lo, bode.omega_hi) = parse_range(range);
            return cmd_bode(bode, std::cout, std::cerr);
        }
        if (*sweep_cmd) {
            sweep.values = parse_value_list(values);
            return cmd_sweep(sweep, std::cout, std::cerr);
        }
        if (*profile_cmd) {
            return cmd_profile(profile, profile_out, std::cout, std::cerr);
        }
    } catch (const gfess::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfigError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
