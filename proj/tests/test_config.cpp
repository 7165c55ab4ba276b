#include "doctest.h"

#include <string>

#include "cryospike/config.hpp"

using namespace cryospike;

TEST_CASE("an empty document yields the nominal cell with 1 ns sampling") {
    const RunConfig rc = parse_config("{}");
    CHECK(rc.setup.bias_current == 59e-6);
    CHECK(rc.setup.input_current == 6e-6);
    CHECK(rc.setup.control_state == SmState::HRS);
    CHECK(rc.setup.main_state == SmState::HRS);
    CHECK(rc.t_end == 20e-6);
    CHECK(rc.tol.sample_interval == 1e-9);
    CHECK(rc.neuron.control_memristor.r_lrs == 14.4e-3);
    CHECK(rc.neuron.coupling_inductance == 20e-9);
    CHECK(rc.neuron.coupling_resistance == 2e-3);
    CHECK_FALSE(rc.has_sweep);
    CHECK_FALSE(rc.has_mc);
}

TEST_CASE("suffixed values parse to the exact SI literal") {
    const RunConfig rc = parse_config(R"({
        "drive": {"i_bias_uA": 55, "t_end_us": 30},
        "snw_main": {"inductance_nH": 12.5},
        "sm1": {"r_hrs_mohm": 101.5}
    })");
    CHECK(rc.setup.bias_current == 55e-6);
    CHECK(rc.t_end == 30e-6);
    CHECK(rc.neuron.main_nanowire.inductance == 12.5e-9);
    CHECK(rc.neuron.control_memristor.r_hrs == 101.5e-3);
}

TEST_CASE("serialization is a fixed point of parsing") {
    const std::string s1 = write_config(parse_config("{}"));
    const std::string s2 = write_config(parse_config(s1));
    CHECK(s1 == s2);

    const std::string doc = R"({
        "drive": {"i_bias_uA": 58.25, "sm2_state": "LRS"},
        "experiment": {"sweep": {"parameter": "bias_current", "values_uA": [55, 58, 59.5]}}
    })";
    const std::string t1 = write_config(parse_config(doc));
    const std::string t2 = write_config(parse_config(t1));
    CHECK(t1 == t2);
}

TEST_CASE("round-tripping preserves every value bit for bit") {
    const RunConfig a = parse_config(R"({"drive": {"i_bias_uA": 58.7, "i_in_uA": 4.2}})");
    const RunConfig b = parse_config(write_config(a));
    CHECK(a.setup.bias_current == b.setup.bias_current);
    CHECK(a.setup.input_current == b.setup.input_current);
    CHECK(a.neuron.control_nanowire.critical_current ==
          b.neuron.control_nanowire.critical_current);
    CHECK(a.tol.event_time == b.tol.event_time);
}

TEST_CASE("an orientation angle re-derives both memristor pairs and wins") {
    const RunConfig rc = parse_config(R"({
        "sm1": {"r_lrs_mohm": 1.0},
        "circuit": {"orientation_deg": 30}
    })");
    const auto [lrs, hrs] = sm_pair_from_orientation(30.0);
    CHECK(rc.neuron.control_memristor.r_lrs == lrs);
    CHECK(rc.neuron.control_memristor.r_hrs == hrs);
    CHECK(rc.neuron.main_memristor.r_lrs == lrs);
    CHECK(rc.has_orientation);
    CHECK(rc.orientation_deg == 30.0);
}

TEST_CASE("a constant gate drive is rejected") {
    CHECK_THROWS_AS(parse_config(R"({"drive": {"i_gate_uA": 3}})"), ConfigError);
    CHECK_NOTHROW(parse_config(R"({"drive": {"i_gate_uA": 0}})"));
}

TEST_CASE("unknown sections, keys and malformed values are rejected") {
    CHECK_THROWS_AS(parse_config(R"({"bogus": {}})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"drive": {"i_bias_mA": 1}})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"drive": {"sm1_state": "MRS"}})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"drive": {"i_bias_uA": "high"}})"), ConfigError);
    CHECK_THROWS_AS(parse_config("not json"), ConfigError);
    CHECK_THROWS_AS(parse_config("[1, 2]"), ConfigError);
}

TEST_CASE("sweep sections carry the parameter, values and combo subset") {
    const RunConfig rc = parse_config(R"({
        "drive": {"i_in_uA": 5},
        "experiment": {"sweep": {
            "parameter": "nanowire_inductance",
            "values_nH": [8, 10, 12],
            "combos": ["HRS-HRS", "LRS-LRS"],
            "t_end_us": 15
        }}
    })");
    REQUIRE(rc.has_sweep);
    CHECK(rc.sweep.parameter == "nanowire_inductance");
    CHECK(rc.sweep.values == std::vector<double>{8e-9, 10e-9, 12e-9});
    REQUIRE(rc.sweep.combos.size() == 2);
    CHECK(rc.sweep.combos[1].control == SmState::LRS);
    CHECK(rc.sweep.t_end == 15e-6);
    /// The sweep inherits the file's drive settings.
    CHECK(rc.sweep.setup.input_current == 5e-6);
}

TEST_CASE("sweep values must use the suffix that matches the parameter") {
    CHECK_THROWS_AS(parse_config(R"({"experiment": {"sweep": {
        "parameter": "bias_current", "values_nH": [1, 2]}}})"),
                    ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"experiment": {"sweep": {
        "parameter": "bias_current", "values_uA": []}}})"),
                    ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"experiment": {"sweep": {"values_uA": [1]}}})"),
                    ConfigError);
}

TEST_CASE("monte carlo sections parse seeds, grids and dispersions") {
    const RunConfig rc = parse_config(R"({
        "experiment": {"montecarlo": {
            "seed": 11,
            "samples": 40,
            "bias_points_uA": [58.6, 59.1],
            "sigma_critical_current_uA": 0.25,
            "per_device": true,
            "values_are_3sigma": true
        }}
    })");
    REQUIRE(rc.has_mc);
    CHECK(rc.mc.seed == 11);
    CHECK(rc.mc.samples == 40);
    CHECK(rc.mc.bias_points == std::vector<double>{58.6e-6, 59.1e-6});
    CHECK(rc.mc.sigma_critical_current == 0.25e-6);
    CHECK(rc.mc.per_device);
    CHECK(rc.mc.values_are_3sigma);
    CHECK_THROWS_AS(parse_config(R"({"experiment": {"montecarlo": {"seed": -3}}})"),
                    ConfigError);
}

TEST_CASE("state labels round-trip through their names") {
    CHECK(parse_sm_state("HRS") == SmState::HRS);
    CHECK(parse_sm_state("LRS") == SmState::LRS);
    CHECK_THROWS_AS(parse_sm_state("hrs"), ConfigError);
    CHECK(sm_state_name(SmState::HRS) == "HRS");
    const StateCombo combo = parse_combo("LRS-HRS");
    CHECK(combo.control == SmState::LRS);
    CHECK(combo.main == SmState::HRS);
    CHECK(combo_label(combo) == "LRS-HRS");
    CHECK_THROWS_AS(parse_combo("LRS"), ConfigError);
    CHECK_THROWS_AS(parse_combo("LRS+HRS"), ConfigError);
}
