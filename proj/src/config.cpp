#include "gfess/config.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <sstream>
#include <variant>

#include <nlohmann/json.hpp>

namespace gfess {

using nlohmann::json;

ConfigError::ConfigError(std::string key, std::optional<int> line, const std::string& what)
    : Error([&] {
          std::ostringstream msg;
          if (line) {
              msg << "line " << *line << ": ";
          }
          if (!key.empty()) {
              msg << "key '" << key << "': ";
          }
          msg << what;
          return msg.str();
      }()),
      key_(std::move(key)),
      line_(line) {}

namespace {

using RealRef = double& (*)(ScenarioConfig&);
using FlagRef = bool& (*)(ScenarioConfig&);
using CountRef = int& (*)(ScenarioConfig&);

struct Field {
    std::string_view key;
    std::string_view alias;
    std::variant<RealRef, FlagRef, CountRef> ref;
};

// clang-format off
const std::array<Field, 24> kFields{{
    {"h_sg_s", "h_sg", RealRef{[](ScenarioConfig& c) -> double& { return c.sg.h_sg; }}},
    {"d_sg_pu", "d_sg", RealRef{[](ScenarioConfig& c) -> double& { return c.sg.d_sg; }}},
    {"kp_sg_pu", "kp_sg", RealRef{[](ScenarioConfig& c) -> double& { return c.sg.kp_sg; }}},
    {"ki_sg_pu_per_s", "ki_sg", RealRef{[](ScenarioConfig& c) -> double& { return c.sg.ki_sg; }}},
    {"t_sg_s", "t_sg", RealRef{[](ScenarioConfig& c) -> double& { return c.sg.t_sg; }}},
    {"vsm_enabled", "vsm_enabled", FlagRef{[](ScenarioConfig& c) -> bool& { return c.vsm_enabled; }}},
    {"h_vsm_s", "h_vsm", RealRef{[](ScenarioConfig& c) -> double& { return c.vsm.h_vsm; }}},
    {"d_vsm_pu", "d_vsm", RealRef{[](ScenarioConfig& c) -> double& { return c.vsm.d_vsm; }}},
    {"kp_vsm_pu", "kp_vsm", RealRef{[](ScenarioConfig& c) -> double& { return c.vsm.kp_vsm; }}},
    {"t_vsm_s", "t_vsm", RealRef{[](ScenarioConfig& c) -> double& { return c.vsm.t_vsm; }}},
    {"e_nom_pu_s", "e_nom", RealRef{[](ScenarioConfig& c) -> double& { return c.ess.e_nom; }}},
    {"soc_ref", "soc_ref", RealRef{[](ScenarioConfig& c) -> double& { return c.ess.soc_ref; }}},
    {"soc_ini", "soc_ini", RealRef{[](ScenarioConfig& c) -> double& { return c.ess.soc_ini; }}},
    {"kp_e_pu", "kp_e", RealRef{[](ScenarioConfig& c) -> double& { return c.ess.kp_e; }}},
    {"ki_e_pu_per_s", "ki_e", RealRef{[](ScenarioConfig& c) -> double& { return c.ess.ki_e; }}},
    {"p_rating_pu", "p_rating", RealRef{[](ScenarioConfig& c) -> double& { return c.ess.p_rating; }}},
    {"recovery_enabled", "recovery_enabled", FlagRef{[](ScenarioConfig& c) -> bool& { return c.recovery_enabled; }}},
    {"saturation_enabled", "saturation_enabled", FlagRef{[](ScenarioConfig& c) -> bool& { return c.saturation_enabled; }}},
    {"step_time_s", "step_time", RealRef{[](ScenarioConfig& c) -> double& { return c.step_time_s; }}},
    {"delta_p_l_pu", "delta_p_l", RealRef{[](ScenarioConfig& c) -> double& { return c.delta_p_l; }}},
    {"duration_s", "duration", RealRef{[](ScenarioConfig& c) -> double& { return c.duration_s; }}},
    {"dt_s", "dt", RealRef{[](ScenarioConfig& c) -> double& { return c.dt_s; }}},
    {"base_frequency_hz", "base_frequency", RealRef{[](ScenarioConfig& c) -> double& { return c.base_frequency_hz; }}},
    {"decimation", "decimation", CountRef{[](ScenarioConfig& c) -> int& { return c.decimation; }}},
}};
// clang-format on

const Field* find_field(std::string_view name) {
    for (const auto& f : kFields) {
        if (f.key == name || f.alias == name) {
            return &f;
        }
    }
    return nullptr;
}

int line_of_byte(std::string_view text, std::size_t byte) {
    byte = std::min(byte, text.size());
    return 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(byte), '\n'));
}

std::optional<int> line_of_key(std::string_view text, std::string_view key) {
    const std::string quoted = "\"" + std::string(key) + "\"";
    const auto pos = text.find(quoted);
    if (pos == std::string_view::npos) {
        return std::nullopt;
    }
    return line_of_byte(text, pos);
}

void assign(ScenarioConfig& config, const Field& field, const json& value, std::optional<int> line) {
    const std::string key(field.key);
    std::visit(
        [&](auto ref) {
            using Ref = decltype(ref);
            if constexpr (std::is_same_v<Ref, RealRef>) {
                if (!value.is_number()) {
                    throw ConfigError(key, line, "expected a number");
                }
                const double v = value.get<double>();
                if (!std::isfinite(v)) {
                    throw ConfigError(key, line, "expected a finite number");
                }
                ref(config) = v;
            } else if constexpr (std::is_same_v<Ref, FlagRef>) {
                if (!value.is_boolean()) {
                    throw ConfigError(key, line, "expected true or false");
                }
                ref(config) = value.get<bool>();
            } else {
                if (!value.is_number_integer()) {
                    throw ConfigError(key, line, "expected an integer");
                }
                ref(config) = value.get<int>();
            }
        },
        field.ref);
}

}  // namespace

Scenario ScenarioConfig::to_scenario() const {
    Scenario s;
    s.sg = sg;
    s.vsm = vsm_enabled ? std::optional<VsmParams>(vsm) : std::nullopt;
    s.ess = ess;
    s.recovery_enabled = recovery_enabled;
    s.saturation_enabled = saturation_enabled;
    s.step_time_s = step_time_s;
    s.delta_p_l = delta_p_l;
    s.duration_s = duration_s;
    s.dt_s = dt_s;
    s.base_frequency_hz = base_frequency_hz;
    s.decimation = decimation;
    return s;
}

ScenarioConfig table1_config() { return ScenarioConfig{}; }

std::optional<ScenarioConfig> builtin_profile(std::string_view name) {
    if (name == "table1") {
        return table1_config();
    }
    return std::nullopt;
}

ScenarioConfig parse_config(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        throw ConfigError("", line_of_byte(text, e.byte == 0 ? 0 : e.byte - 1), e.what());
    }
    if (!doc.is_object()) {
        throw ConfigError("", 1, "configuration must be a JSON object");
    }
    ScenarioConfig config = table1_config();
    for (const auto& [key, value] : doc.items()) {
        const Field* field = find_field(key);
        if (field == nullptr || field->key != key) {
            throw ConfigError(key, line_of_key(text, key), "unknown key");
        }
        assign(config, *field, value, line_of_key(text, key));
    }
    return config;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("", std::nullopt, "cannot open " + path.string());
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str());
}

std::string to_json(const ScenarioConfig& config) {
    ScenarioConfig copy = config;
    json doc = json::object();
    for (const auto& f : kFields) {
        std::visit([&](auto ref) { doc[std::string(f.key)] = ref(copy); }, f.ref);
    }
    return doc.dump(2) + "\n";
}

std::vector<std::string> config_keys() {
    std::vector<std::string> keys;
    for (const auto& f : kFields) {
        keys.emplace_back(f.key);
    }
    return keys;
}

std::optional<std::string> resolve_key(std::string_view name) {
    if (const Field* f = find_field(name)) {
        return std::string(f->key);
    }
    return std::nullopt;
}

bool is_numeric_key(std::string_view key) {
    const Field* f = find_field(key);
    return f != nullptr && std::holds_alternative<RealRef>(f->ref);
}

void set_field(ScenarioConfig& config, std::string_view key, std::string_view json_value) {
    const Field* field = find_field(key);
    if (field == nullptr) {
        throw ConfigError(std::string(key), std::nullopt, "unknown key");
    }
    json value;
    try {
        value = json::parse(json_value.begin(), json_value.end());
    } catch (const json::parse_error&) {
        throw ConfigError(std::string(key), std::nullopt, "cannot parse value '" + std::string(json_value) + "'");
    }
    assign(config, *field, value, std::nullopt);
}

void set_numeric_field(ScenarioConfig& config, std::string_view key, double value) {
    const Field* field = find_field(key);
    if (field == nullptr || !std::holds_alternative<RealRef>(field->ref)) {
        throw ConfigError(std::string(key), std::nullopt, "not a numeric parameter");
    }
    std::get<RealRef>(field->ref)(config) = value;
}

}  // namespace gfess
