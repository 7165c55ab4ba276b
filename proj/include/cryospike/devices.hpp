#pragma once

#include <utility>

#include "cryospike/errors.hpp"

// Lumped two-state device laws. Everything is strict SI; the switching rules
// are pure functions of (state, observable) so the hybrid solver can derive
// its guards from them.

namespace cryospike {

// ============================================================================
// Superconducting nanowire (SNW)
// ============================================================================

/// Hysteretic nanowire switch: superconducting until |i| reaches the critical
/// current, resistive until |i| falls back to the retrapping current.
struct SnwParams {
    double critical_current = 30e-6;   ///< I_c [A]
    double retrapping_current = 20e-6; ///< I_r [A], must be < I_c
    double hotspot_resistance = 5e3;   ///< R_hs [ohm] in the resistive state
    double inductance = 10e-9;         ///< series kinetic inductance L_NW [H]

    void validate() const;
};

enum class SnwState { Superconducting, Resistive };

/// Next nanowire state for branch current i (absolute-value comparison,
/// boundary values switch).
SnwState snw_transition(SnwState state, double i_branch, const SnwParams& p);

/// Channel resistance in a given state: 0 when superconducting.
double snw_resistance(SnwState state, const SnwParams& p);

// ============================================================================
// Superconducting memristor (SM)
// ============================================================================

/// Non-volatile two-state resistor. Programs to HRS at v >= +v_set and to
/// LRS at v <= -v_set; holds its state otherwise.
struct SmParams {
    double r_lrs = 14.4e-3;  ///< low-resistance state [ohm]
    double r_hrs = 98e-3;    ///< high-resistance state [ohm], must be > r_lrs
    double orientation_deg = 60.0; ///< misorientation angle the pair was derived from
    double v_set = 50e-6;    ///< programming threshold [V]

    void validate() const;
};

enum class SmState { LRS, HRS };

/// Next memristor state for voltage v across the device. Idempotent: applying
/// the rule twice at the same voltage equals applying it once.
SmState sm_transition(SmState state, double v_across, const SmParams& p);

double sm_resistance(SmState state, const SmParams& p);

/// (r_lrs, r_hrs) as a function of the misorientation angle:
///   r_lrs = r0 * (1 - eps * sin(angle)),  r_hrs = r0 * (1 + eps * sin(angle)).
/// Angles outside [0, 90] degrees throw; both returned values are positive
/// and r_hrs > r_lrs for any positive angle.
std::pair<double, double> sm_pair_from_orientation(double orientation_deg,
                                              double r0 = 56.2e-3,
                                              double eps = 0.8589);

// ============================================================================
// Heater cryotron (h-Tron)
// ============================================================================

/// Gate-current-controlled channel: superconducting below the gate threshold,
/// resistive at or above it (ties resolve resistive).
struct HtronParams {
    double gate_threshold = 10e-6;    ///< I_g_th [A]
    double channel_resistance = 5e3;  ///< R_hT [ohm] with the gate driven
    double parallel_resistance = 0.0; ///< optional shunt R_P [ohm]; 0 = absent

    void validate() const;
};

/// True when the channel is resistive for the given gate current.
bool htron_channel_on(double i_gate, const HtronParams& p);

/// Channel resistance for the given gate current: 0 or channel_resistance.
double htron_channel_resistance(double i_gate, const HtronParams& p);

} // namespace cryospike
