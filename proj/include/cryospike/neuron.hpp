#pragma once

#include <iosfwd>

#include "cryospike/solver.hpp"

namespace cryospike {

/// Node ids of the two-branch neuron cell.
namespace neuron_node {
inline constexpr int merge = 1;    ///< bias injection, joins both branches
inline constexpr int control = 2;  ///< control branch, across its memristor
inline constexpr int output = 3;   ///< main branch, across its memristor
} // namespace neuron_node

/// Device and element parameters of the reconfigurable neuron: a main branch
/// (input, memristor, nanowire) and a control branch behind a gate-controlled
/// cryotron, both fed from one bias source through equal coupling inductors.
struct NeuronConfig {
    SnwParams control_nanowire;
    SnwParams main_nanowire;
    SmParams control_memristor;
    SmParams main_memristor;
    HtronParams htron;
    double coupling_inductance = 20e-9;
    /// Series loss of each coupling leg. Zero gives purely inductive coupling;
    /// the small nominal value damps the branch-to-branch phase dynamics so the
    /// two mixed-state frequency levels pull apart as the bias rises.
    double coupling_resistance = 2e-3;

    void validate() const;
    /// Derive both memristor resistance pairs from one misorientation angle.
    void set_orientation(double orientation_deg);
};

/// Sources: i_bias into the merge node, i_in into the output node, i_gate
/// driving the cryotron gate. Devices: snw1/sm1 on the control branch,
/// snw2/sm2 on the main branch, htron between the coupling inductor and the
/// control branch.
[[nodiscard]] Netlist build_neuron(const NeuronConfig& cfg);

[[nodiscard]] Mode neuron_mode(SnwState control_nw, SnwState main_nw, bool gate_on,
                               SmState control_mem, SmState main_mem);

/// Inductor currents after the bias is brought up slowly with both nanowires
/// superconducting and the gate off.
[[nodiscard]] Eigen::VectorXd init_bias_split(const NeuronConfig& cfg, double i_bias);

struct SpikingSetup {
    SmState control_state = SmState::HRS;
    SmState main_state = SmState::HRS;
    double bias_current = 59e-6;
    double input_current = 6e-6;
};

/// Spiking run from the slow-ramp bias split, input applied from t = 0 and
/// the gate held off. Throws RegimeError when the bias meets or exceeds the
/// summed critical currents, where both branches latch resistive instead of
/// oscillating.
[[nodiscard]] RunResult run_spiking(const NeuronConfig& cfg, const SpikingSetup& setup,
                                    double t_end, const ToleranceSpec& tol = {});

struct ProgrammingReport {
    int pulses = 0;
    double control_margin = 0.0; ///< peak |v| across sm1 in its write window
    double main_margin = 0.0;    ///< peak |v| across sm2 in its write window
    Mode final_mode;
    Trace trace;
};

/// Drive the write-pulse sequence that moves the memristor pair from one
/// state combination to another: one shared pulse into the bias feed sets
/// both devices to the control target, and a second gated pulse retargets
/// the main device when the two targets differ. Pulse edges are staircased
/// so that neither device sees a spurious write-scale voltage flash. Throws
/// ProgrammingError when the final states, the write margins or the
/// nanowire reset fail to verify.
[[nodiscard]] ProgrammingReport program_states(const NeuronConfig& cfg,
                                               SmState control_from, SmState main_from,
                                               SmState control_to, SmState main_to,
                                               const ToleranceSpec& tol = {});

/// True when a run never disturbs the memristors: no SM transition events
/// and both SM voltages stay below the write threshold throughout.
[[nodiscard]] bool verify_no_spurious_programming(const Trace& trace, double v_set);

/// Exact column set: t_s,v_out_V,v_ctrl_V,i_L_main_A,i_L_ctrl_A,
/// mode_snw1,mode_snw2,state_sm1,state_sm2.
void write_neuron_trace_csv(std::ostream& os, const Trace& trace);

} // namespace cryospike
