#pragma once

#include "cryospike/solver.hpp"

namespace cryospike {

/// Minimal relaxation oscillator: a bias source and shunt resistor driving a
/// nanowire through its series inductor.
struct OscillatorConfig {
    SnwParams nanowire;
    double shunt_resistance = 98e-3;
    double bias_current = 40e-6;

    void validate() const;
};

/// Node 1 carries the bias and shunt, node 2 sits between the inductor and
/// the nanowire.
[[nodiscard]] Netlist build_oscillator(const OscillatorConfig& cfg);

/// Exact oscillation period from the two per-phase exponentials. Throws
/// RegimeError when the bias cannot sustain oscillation.
[[nodiscard]] double oscillator_period(const OscillatorConfig& cfg);

/// Simulate from the retrapping current in the superconducting branch state.
[[nodiscard]] RunResult run_oscillator(const OscillatorConfig& cfg, double t_end,
                                       const ToleranceSpec& tol = {});

} // namespace cryospike
