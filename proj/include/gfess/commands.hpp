#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "gfess/config.hpp"

namespace gfess::cli {

enum ExitCode : int {
    kOk = 0,
    kConfigError = 2,
    kIntegrationError = 3,
    kDivergence = 4,
    kDegenerateModel = 5,
};

/// Where a subcommand's scenario comes from: a file, or a built-in profile
/// (table1 when neither is given), then `key=value` overrides in order.
struct ConfigSource {
    std::optional<std::filesystem::path> path;
    std::string profile = "table1";
    std::vector<std::string> overrides;
};

/// Resolves a ConfigSource. Throws ConfigError.
ScenarioConfig resolve_config(const ConfigSource& source);

struct SimulateOptions {
    ConfigSource config;
    std::filesystem::path output_dir = ".";
    bool no_vsm = false;
    bool no_recovery = false;
    std::optional<int> decimation;
};

/// Writes timeseries.csv and metrics.json into output_dir.
int cmd_simulate(const SimulateOptions& options, std::ostream& out, std::ostream& err);

/// Prints the energy report (closed form and final-value) as JSON.
int cmd_energy(const ConfigSource& config, std::ostream& out, std::ostream& err);

struct BandwidthOptions {
    ConfigSource config;
    double separation_factor = 2.0;
    std::optional<double> third_control_bw;
};

int cmd_bandwidth(const BandwidthOptions& options, std::ostream& out, std::ostream& err);

enum class BodeTarget { kGf, kPrimary, kSecondary, kSoc };

struct BodeOptions {
    ConfigSource config;
    BodeTarget which = BodeTarget::kGf;
    double omega_lo = 1e-3;
    double omega_hi = 1e3;
    int points = 200;
    std::filesystem::path output_dir = ".";
};

/// Writes bode.csv. Rows landing on a pole carry blank magnitude and phase.
int cmd_bode(const BodeOptions& options, std::ostream& out, std::ostream& err);

struct SweepOptions {
    ConfigSource config;
    std::string param;
    std::vector<double> values;
    std::filesystem::path output_dir = ".";
};

/// One simulation per value, run concurrently. Writes run_<i>/metrics.json and
/// sweep_summary.csv.
int cmd_sweep(const SweepOptions& options, std::ostream& out, std::ostream& err);

/// Writes the resolved configuration as JSON to `path`, or to `out` when empty.
int cmd_profile(const ConfigSource& config, const std::optional<std::filesystem::path>& path, std::ostream& out,
                std::ostream& err);

/// Comma-separated list of reals ("0.1,0.4,1.6").
std::vector<double> parse_value_list(const std::string& text);

/// "lo:hi"
std::pair<double, double> parse_range(const std::string& text);

}  // namespace gfess::cli
