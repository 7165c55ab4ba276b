#include "doctest.h"

#include "cryospike/devices.hpp"

using namespace cryospike;

TEST_CASE("nanowire switching is hysteretic with inclusive thresholds") {
    const SnwParams p;
    CHECK(snw_transition(SnwState::Superconducting, 29.9e-6, p) == SnwState::Superconducting);
    CHECK(snw_transition(SnwState::Superconducting, 30e-6, p) == SnwState::Resistive);
    CHECK(snw_transition(SnwState::Superconducting, -30e-6, p) == SnwState::Resistive);
    CHECK(snw_transition(SnwState::Resistive, 25e-6, p) == SnwState::Resistive);
    CHECK(snw_transition(SnwState::Resistive, 20e-6, p) == SnwState::Superconducting);
    CHECK(snw_transition(SnwState::Resistive, -19e-6, p) == SnwState::Superconducting);
}

TEST_CASE("nanowire resistance is zero only in the superconducting state") {
    const SnwParams p;
    CHECK(snw_resistance(SnwState::Superconducting, p) == 0.0);
    CHECK(snw_resistance(SnwState::Resistive, p) == 5e3);
}

TEST_CASE("nanowire parameters reject a retrapping current at or above critical") {
    SnwParams p;
    p.retrapping_current = p.critical_current;
    CHECK_THROWS_AS(p.validate(), ConfigError);
    p.retrapping_current = -1e-6;
    CHECK_THROWS_AS(p.validate(), ConfigError);
    p = SnwParams{};
    p.inductance = 0.0;
    CHECK_THROWS_AS(p.validate(), ConfigError);
}

TEST_CASE("memristor programming thresholds are signed and inclusive") {
    const SmParams p;
    CHECK(sm_transition(SmState::LRS, p.v_set, p) == SmState::HRS);
    CHECK(sm_transition(SmState::HRS, -p.v_set, p) == SmState::LRS);
    CHECK(sm_transition(SmState::LRS, 0.99 * p.v_set, p) == SmState::LRS);
    CHECK(sm_transition(SmState::HRS, -0.99 * p.v_set, p) == SmState::HRS);
    CHECK(sm_transition(SmState::HRS, p.v_set, p) == SmState::HRS);
    CHECK(sm_transition(SmState::LRS, -p.v_set, p) == SmState::LRS);
}

TEST_CASE("memristor transition rule is idempotent at any voltage") {
    const SmParams p;
    for (const double v : {-2.0 * p.v_set, -p.v_set, 0.0, p.v_set, 2.0 * p.v_set}) {
        for (const SmState s : {SmState::LRS, SmState::HRS}) {
            const SmState once = sm_transition(s, v, p);
            CHECK(sm_transition(once, v, p) == once);
        }
    }
}

TEST_CASE("memristor resistances map to their states") {
    const SmParams p;
    CHECK(sm_resistance(SmState::LRS, p) == 14.4e-3);
    CHECK(sm_resistance(SmState::HRS, p) == 98e-3);
    SmParams bad;
    bad.r_hrs = bad.r_lrs;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
}

TEST_CASE("orientation angle reproduces the nominal resistance pair at 60 degrees") {
    const auto [lrs, hrs] = sm_pair_from_orientation(60.0);
    CHECK(lrs == doctest::Approx(14.4e-3).epsilon(1e-3));
    CHECK(hrs == doctest::Approx(98e-3).epsilon(1e-3));
    const auto [l0, h0] = sm_pair_from_orientation(0.0);
    CHECK(l0 == doctest::Approx(56.2e-3));
    CHECK(h0 == doctest::Approx(56.2e-3));
    CHECK_THROWS_AS(sm_pair_from_orientation(-1.0), ConfigError);
    CHECK_THROWS_AS(sm_pair_from_orientation(90.5), ConfigError);
}

TEST_CASE("orientation splits widen monotonically with the angle") {
    double last = 0.0;
    for (const double a : {15.0, 30.0, 45.0, 60.0, 90.0}) {
        const auto [lrs, hrs] = sm_pair_from_orientation(a);
        CHECK(hrs > lrs);
        CHECK(hrs - lrs > last);
        last = hrs - lrs;
    }
}

TEST_CASE("cryotron channel switches at the gate threshold inclusively") {
    const HtronParams p;
    CHECK_FALSE(htron_channel_on(9.9e-6, p));
    CHECK(htron_channel_on(10e-6, p));
    CHECK(htron_channel_on(11e-6, p));
    CHECK(htron_channel_resistance(0.0, p) == 0.0);
    CHECK(htron_channel_resistance(10e-6, p) == 5e3);
    HtronParams bad;
    bad.gate_threshold = 0.0;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
}
