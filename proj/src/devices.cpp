#include "cryospike/devices.hpp"

#include <cmath>

namespace cryospike {

void SnwParams::validate() const {
    if (!(critical_current > 0.0))
        throw ConfigError("nanowire critical current must be positive");
    if (!(retrapping_current > 0.0) || !(retrapping_current < critical_current))
        throw ConfigError("nanowire retrapping current must satisfy 0 < I_r < I_c");
    if (!(hotspot_resistance > 0.0))
        throw ConfigError("nanowire hotspot resistance must be positive");
    if (!(inductance > 0.0))
        throw ConfigError("nanowire inductance must be positive");
}

SnwState snw_transition(SnwState state, double i_branch, const SnwParams& p) {
    const double mag = std::abs(i_branch);
    if (state == SnwState::Superconducting)
        return mag >= p.critical_current ? SnwState::Resistive : state;
    return mag <= p.retrapping_current ? SnwState::Superconducting : state;
}

double snw_resistance(SnwState state, const SnwParams& p) {
    return state == SnwState::Resistive ? p.hotspot_resistance : 0.0;
}

void SmParams::validate() const {
    if (!(r_lrs > 0.0))
        throw ConfigError("memristor LRS resistance must be positive");
    if (!(r_hrs > r_lrs))
        throw ConfigError("memristor HRS resistance must exceed LRS resistance");
    if (!(v_set > 0.0))
        throw ConfigError("memristor programming threshold must be positive");
}

SmState sm_transition(SmState state, double v_across, const SmParams& p) {
    if (v_across >= p.v_set) return SmState::HRS;
    if (v_across <= -p.v_set) return SmState::LRS;
    return state;
}

double sm_resistance(SmState state, const SmParams& p) {
    return state == SmState::HRS ? p.r_hrs : p.r_lrs;
}

std::pair<double, double> sm_pair_from_orientation(double orientation_deg, double r0, double eps) {
    if (!(orientation_deg >= 0.0) || !(orientation_deg <= 90.0))
        throw ConfigError("orientation must lie in [0, 90] degrees");
    if (!(r0 > 0.0) || !(eps >= 0.0) || !(eps < 1.0))
        throw ConfigError("orientation map needs r0 > 0 and 0 <= eps < 1");
    const double s = std::sin(orientation_deg * std::acos(-1.0) / 180.0);
    return {r0 * (1.0 - eps * s), r0 * (1.0 + eps * s)};
}

void HtronParams::validate() const {
    if (!(gate_threshold > 0.0))
        throw ConfigError("h-Tron gate threshold must be positive");
    if (!(channel_resistance > 0.0))
        throw ConfigError("h-Tron channel resistance must be positive");
    if (parallel_resistance < 0.0)
        throw ConfigError("h-Tron shunt resistance must be non-negative");
}

bool htron_channel_on(double i_gate, const HtronParams& p) {
    return std::abs(i_gate) >= p.gate_threshold;
}

double htron_channel_resistance(double i_gate, const HtronParams& p) {
    return htron_channel_on(i_gate, p) ? p.channel_resistance : 0.0;
}

} // namespace cryospike
