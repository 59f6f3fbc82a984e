#include <random>

#include "doctest.h"
#include "gfess/config.hpp"

using namespace gfess;

TEST_CASE("table1 profile") {
    const ScenarioConfig c = table1_config();
    CHECK(c.sg.h_sg == 2.5);
    CHECK(c.sg.d_sg == 0.0);
    CHECK(c.sg.kp_sg == 15.0);
    CHECK(c.sg.ki_sg == 5.0);
    CHECK(c.sg.t_sg == 0.3);
    CHECK(c.vsm.h_vsm == 5.0);
    CHECK(c.vsm.d_vsm == 10.0);
    CHECK(c.vsm.kp_vsm == 15.0);
    CHECK(c.vsm.t_vsm == 0.3);
    CHECK(c.ess.e_nom == 6.8);
    CHECK(c.ess.soc_ref == 0.5);
    CHECK(c.ess.kp_e == 0.4);
    CHECK(c.ess.ki_e == 0.002);
    CHECK(c.ess.p_rating == 1.0);
    CHECK(c.base_frequency_hz == 60.0);
    CHECK(c.delta_p_l == 0.375);
    CHECK(c.step_time_s == 10.0);
    CHECK(builtin_profile("table1").has_value());
    CHECK_FALSE(builtin_profile("nope").has_value());
}

TEST_CASE("round trip through JSON is exact") {
    const ScenarioConfig a = table1_config();
    const ScenarioConfig b = parse_config(to_json(a));
    CHECK(to_json(b) == to_json(a));

    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 20; ++i) {
        ScenarioConfig c = table1_config();
        for (const auto& key : config_keys()) {
            if (is_numeric_key(key)) {
                set_numeric_field(c, key, u(rng) * 10.0);
            }
        }
        const ScenarioConfig d = parse_config(to_json(c));
        CHECK(d.sg.h_sg == c.sg.h_sg);
        CHECK(d.ess.ki_e == c.ess.ki_e);
        CHECK(d.dt_s == c.dt_s);
        CHECK(to_json(d) == to_json(c));
    }
}

TEST_CASE("missing keys default to table1 values") {
    const ScenarioConfig c = parse_config(R"({"kp_e_pu": 3.0, "vsm_enabled": false})");
    CHECK(c.ess.kp_e == 3.0);
    CHECK_FALSE(c.vsm_enabled);
    CHECK(c.sg.ki_sg == 5.0);
    CHECK_FALSE(c.to_scenario().vsm.has_value());
}

TEST_CASE("config errors carry key and line") {
    try {
        parse_config("{\n  \"h_sg_s\": 2.5,\n  \"bogus\": 1\n}");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(e.key() == "bogus");
        REQUIRE(e.line().has_value());
        CHECK(*e.line() == 3);
    }
    try {
        parse_config("{\n  \"h_sg_s\": \"fast\"\n}");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(e.key() == "h_sg_s");
        CHECK(*e.line() == 2);
    }
    try {
        parse_config("{\n  \"h_sg_s\": 2.5,\n  oops\n}");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        REQUIRE(e.line().has_value());
        CHECK(*e.line() == 3);
    }
    // Aliases are accepted on the command line but not in files.
    CHECK_THROWS_AS(parse_config(R"({"kp_e": 1})"), ConfigError);
    CHECK_THROWS_AS(parse_config("[1, 2]"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"decimation": 2.5})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"recovery_enabled": 1})"), ConfigError);
}

TEST_CASE("key resolution") {
    CHECK(resolve_key("kp_e") == "kp_e_pu");
    CHECK(resolve_key("kp_e_pu") == "kp_e_pu");
    CHECK_FALSE(resolve_key("kp_x").has_value());
    CHECK(is_numeric_key("delta_p_l_pu"));
    CHECK_FALSE(is_numeric_key("vsm_enabled"));
    CHECK_FALSE(is_numeric_key("decimation"));

    ScenarioConfig c;
    set_field(c, "recovery_enabled", "false");
    CHECK_FALSE(c.recovery_enabled);
    set_field(c, "ki_sg", "7");
    CHECK(c.sg.ki_sg == 7.0);
    CHECK_THROWS_AS(set_field(c, "ki_sg", "seven"), ConfigError);
    CHECK_THROWS_AS(set_numeric_field(c, "vsm_enabled", 1.0), ConfigError);
}
