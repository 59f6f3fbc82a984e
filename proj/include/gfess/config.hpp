#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gfess/errors.hpp"
#include "gfess/simulator.hpp"
#include "gfess/system.hpp"

namespace gfess {

/// Bad configuration text, unknown key, or a value of the wrong type.
class ConfigError : public Error {
public:
    ConfigError(std::string key, std::optional<int> line, const std::string& what);

    const std::string& key() const noexcept { return key_; }
    std::optional<int> line() const noexcept { return line_; }

private:
    std::string key_;
    std::optional<int> line_;
};

/**
 * Flat, field-for-field mirror of a Scenario with every parameter group.
 * Serialized as a one-level JSON object whose keys carry their units, e.g.
 * `h_sg_s`, `e_nom_pu_s`, `delta_p_l_pu`. Missing keys keep the table1 value;
 * unknown keys are rejected.
 */
struct ScenarioConfig {
    SgParams sg;
    VsmParams vsm;
    bool vsm_enabled = true;
    EssParams ess;
    bool recovery_enabled = true;
    bool saturation_enabled = false;
    double step_time_s = 10.0;
    double delta_p_l = 0.375;
    double duration_s = 400.0;
    double dt_s = 1e-3;
    double base_frequency_hz = kTable1BaseFrequencyHz;
    int decimation = 10;

    Scenario to_scenario() const;
    VsmParams effective_vsm() const { return vsm_enabled ? vsm : VsmParams::disabled(); }
};

/// Built-in profile reproducing the tested system's parameter table.
ScenarioConfig table1_config();

/// Returns the profile for a known name ("table1"), or nullopt.
std::optional<ScenarioConfig> builtin_profile(std::string_view name);

/// Parses JSON text on top of the table1 defaults.
ScenarioConfig parse_config(std::string_view text);
ScenarioConfig load_config(const std::filesystem::path& path);

/// Pretty-printed JSON with every key; parse_config(to_json(c)) reproduces c exactly.
std::string to_json(const ScenarioConfig& config);

/// All config keys, in serialization order.
std::vector<std::string> config_keys();

/// Resolves a key or its unit-free alias (e.g. "kp_e" for "kp_e_pu"); nullopt if unknown.
std::optional<std::string> resolve_key(std::string_view name);

/// True when the key holds a real number (as opposed to a flag or integer).
bool is_numeric_key(std::string_view key);

/// Sets one field from a JSON-encoded value ("0.4", "true", "10").
void set_field(ScenarioConfig& config, std::string_view key, std::string_view json_value);
void set_numeric_field(ScenarioConfig& config, std::string_view key, double value);

}  // namespace gfess
