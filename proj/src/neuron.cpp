#include "cryospike/neuron.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "cryospike/linear_system.hpp"

namespace cryospike {

void NeuronConfig::validate() const {
    control_nanowire.validate();
    main_nanowire.validate();
    control_memristor.validate();
    main_memristor.validate();
    htron.validate();
    if (!(coupling_inductance > 0.0))
        throw ConfigError("coupling inductance must be positive");
    if (!(coupling_resistance >= 0.0))
        throw ConfigError("coupling resistance must be nonnegative");
}

void NeuronConfig::set_orientation(double orientation_deg) {
    const auto [lo, hi] = sm_pair_from_orientation(orientation_deg);
    for (SmParams* p : {&control_memristor, &main_memristor}) {
        p->r_lrs = lo;
        p->r_hrs = hi;
        p->orientation_deg = orientation_deg;
    }
}

Netlist build_neuron(const NeuronConfig& cfg) {
    cfg.validate();
    Netlist nl;
    const int merge = nl.add_node();
    const int control = nl.add_node();
    const int output = nl.add_node();
    const int gate_in = nl.add_node();
    const int ctrl_mid = nl.add_node();
    const int main_mid = nl.add_node();
    nl.add_current_source("i_bias", 0, merge);
    nl.add_current_source("i_in", 0, output);
    nl.add_current_source("i_gate", 0, 0);
    if (cfg.coupling_resistance > 0.0) {
        const int leg1 = nl.add_node();
        const int leg2 = nl.add_node();
        nl.add_inductor("L_c1", merge, leg1, cfg.coupling_inductance);
        nl.add_resistor("R_c1", leg1, gate_in, cfg.coupling_resistance);
        nl.add_inductor("L_c2", merge, leg2, cfg.coupling_inductance);
        nl.add_resistor("R_c2", leg2, output, cfg.coupling_resistance);
    } else {
        nl.add_inductor("L_c1", merge, gate_in, cfg.coupling_inductance);
        nl.add_inductor("L_c2", merge, output, cfg.coupling_inductance);
    }
    nl.add_inductor("L_nw1", control, ctrl_mid, cfg.control_nanowire.inductance);
    nl.add_inductor("L_nw2", output, main_mid, cfg.main_nanowire.inductance);
    nl.add_nanowire("snw1", cfg.control_nanowire);
    nl.add_nanowire("snw2", cfg.main_nanowire);
    nl.add_cryotron("htron", cfg.htron, "i_gate");
    nl.add_memristor("sm1", cfg.control_memristor);
    nl.add_memristor("sm2", cfg.main_memristor);
    nl.add_switch("sw_ht", gate_in, control, "htron");
    nl.add_switch("sw_snw1", ctrl_mid, 0, "snw1");
    nl.add_switch("sw_snw2", main_mid, 0, "snw2");
    nl.add_switch("sw_sm1", control, 0, "sm1");
    nl.add_switch("sw_sm2", output, 0, "sm2");
    nl.validate();
    return nl;
}

Mode neuron_mode(SnwState control_nw, SnwState main_nw, bool gate_on,
                 SmState control_mem, SmState main_mem) {
    Mode mode;
    mode.set("snw1", control_nw);
    mode.set("snw2", main_nw);
    mode.set("htron", gate_on);
    mode.set("sm1", control_mem);
    mode.set("sm2", main_mem);
    return mode;
}

Eigen::VectorXd init_bias_split(const NeuronConfig& cfg, double i_bias) {
    const Netlist nl = build_neuron(cfg);
    Eigen::VectorXd u(3);
    u << i_bias, 0.0, 0.0;
    const Mode quiescent = neuron_mode(SnwState::Superconducting, SnwState::Superconducting,
                                       false, SmState::HRS, SmState::HRS);
    // Resistive legs pin the DC division between the branches; a lossless
    // coupler leaves it to the slow-ramp inductive split instead.
    if (cfg.coupling_resistance > 0.0) {
        const auto sys = build_mode_system(nl, quiescent);
        return sys.full_currents(equilibrium(sys, u), u);
    }
    return ramp_limit_currents(nl, quiescent, u);
}

namespace {

std::string amps(double v) {
    char b[40];
    std::snprintf(b, sizeof b, "%.6g", v);
    return b;
}

} // namespace

RunResult run_spiking(const NeuronConfig& cfg, const SpikingSetup& setup, double t_end,
                      const ToleranceSpec& tol) {
    cfg.validate();
    const double latch_limit =
        cfg.control_nanowire.critical_current + cfg.main_nanowire.critical_current;
    if (setup.bias_current >= latch_limit)
        throw RegimeError("bias of " + amps(setup.bias_current) +
                          " A meets or exceeds the combined critical current of " +
                          amps(latch_limit) + " A; both branches latch resistive");
    const Netlist nl = build_neuron(cfg);
    Eigen::VectorXd u0(3);
    u0 << setup.bias_current, setup.input_current, 0.0;
    return run_hybrid(nl,
                      neuron_mode(SnwState::Superconducting, SnwState::Superconducting,
                                  false, setup.control_state, setup.main_state),
                      init_bias_split(cfg, setup.bias_current), Schedule(u0), t_end, tol);
}

ProgrammingReport program_states(const NeuronConfig& cfg, SmState control_from,
                                 SmState main_from, SmState control_to, SmState main_to,
                                 const ToleranceSpec& tol) {
    cfg.validate();
    const Netlist nl = build_neuron(cfg);

    constexpr double kEdge = 1e-9;
    constexpr double kHold = 10e-9;
    constexpr double kSettle = 10e-9;
    /// After the last edge a small circulating current remains in the coupling
    /// loop; let it decay below the nanowire thresholds before the final check.
    constexpr double kTail = 4e-6;
    constexpr int kEdgeSteps = 64;

    // An ungated pulse into the bias port splits evenly between the two legs and
    // writes both memristors; a gated second pulse steers the full amplitude into
    // the main branch to retarget SM2 alone. Each leg carries half the ungated
    // amplitude, so size it for a 2x write margin at the lower LRS resistance.
    const double v_set_max = std::max(cfg.control_memristor.v_set, cfg.main_memristor.v_set);
    const double r_lrs_min = std::min(cfg.control_memristor.r_lrs, cfg.main_memristor.r_lrs);
    const double amp = 1.25 * 2.0 * (2.0 * v_set_max) / r_lrs_min;
    const double amp1 = control_to == SmState::HRS ? amp : -amp;
    const bool two_pulses = main_to != control_to;
    const double amp2 = main_to == SmState::HRS ? amp : -amp;
    const double gate_hi = 2.0 * cfg.htron.gate_threshold;

    Schedule sched(Eigen::VectorXd::Zero(3));
    auto step = [&](double t, double drive, double gate) {
        Eigen::VectorXd v(3);
        v << drive, 0.0, gate;
        sched.add_step(t, v);
    };
    auto edge = [&](double t0, double from, double to, double gate) {
        for (int k = 1; k <= kEdgeSteps; ++k)
            step(t0 + kEdge * k / kEdgeSteps, from + (to - from) * k / kEdgeSteps, gate);
    };

    edge(0.0, 0.0, amp1, 0.0);
    const double p1_hold_end = kEdge + kHold;
    edge(p1_hold_end, amp1, 0.0, 0.0);
    double t_end = p1_hold_end + kEdge + kSettle;
    double p2_hold_end = 0.0;
    if (two_pulses) {
        const double gate_on = t_end;
        step(gate_on, 0.0, gate_hi);
        edge(gate_on, 0.0, amp2, gate_hi);
        p2_hold_end = gate_on + kEdge + kHold;
        edge(p2_hold_end, amp2, 0.0, gate_hi);
        const double gate_off = p2_hold_end + kEdge + kSettle;
        step(gate_off, 0.0, 0.0);
        t_end = gate_off;
    }
    t_end += kTail;

    auto rr = run_hybrid(nl,
                         neuron_mode(SnwState::Superconducting, SnwState::Superconducting,
                                     false, control_from, main_from),
                         Eigen::VectorXd::Zero(4), sched, t_end, tol);

    auto window_peak = [&](int node, double lo, double hi) {
        double peak = 0.0;
        for (std::size_t i = 0; i < rr.trace.size(); ++i)
            if (rr.trace.t[i] >= lo && rr.trace.t[i] <= hi)
                peak = std::max(peak, std::abs(rr.trace.node_v[i](node)));
        return peak;
    };

    ProgrammingReport report;
    report.pulses = two_pulses ? 2 : 1;
    report.control_margin = window_peak(neuron_node::control, p1_hold_end - 2e-9, p1_hold_end);
    report.main_margin = two_pulses
                             ? window_peak(neuron_node::output, p2_hold_end - 2e-9, p2_hold_end)
                             : window_peak(neuron_node::output, p1_hold_end - 2e-9, p1_hold_end);

    if (rr.final_mode.sm("sm1") != control_to || rr.final_mode.sm("sm2") != main_to)
        throw ProgrammingError("memristor states after the pulse sequence do not match the targets");
    if (rr.final_mode.snw("snw1") != SnwState::Superconducting ||
        rr.final_mode.snw("snw2") != SnwState::Superconducting)
        throw ProgrammingError("a nanowire stayed resistive after programming");
    if (report.control_margin < 2.0 * cfg.control_memristor.v_set)
        throw ProgrammingError("control write margin of " + amps(report.control_margin) +
                               " V is below twice the threshold");
    if (report.main_margin < 2.0 * cfg.main_memristor.v_set)
        throw ProgrammingError("main write margin of " + amps(report.main_margin) +
                               " V is below twice the threshold");
    const double quiet_after = two_pulses ? p2_hold_end + kEdge : p1_hold_end + kEdge;
    const double sm1_quiet_after = two_pulses ? p1_hold_end + kEdge : quiet_after;
    for (const auto& ev : rr.trace.events) {
        if (ev.device == "sm2" && ev.t > quiet_after)
            throw ProgrammingError("main memristor flipped outside its write window");
        if (ev.device == "sm1" && ev.t > sm1_quiet_after)
            throw ProgrammingError("control memristor flipped outside its write window");
    }

    report.final_mode = rr.final_mode;
    report.trace = std::move(rr.trace);
    return report;
}

bool verify_no_spurious_programming(const Trace& trace, double v_set) {
    for (const auto& ev : trace.events)
        if (ev.device == "sm1" || ev.device == "sm2") return false;
    for (std::size_t i = 0; i < trace.size(); ++i) {
        const auto& v = trace.node_v[i];
        if (std::abs(v(neuron_node::control)) >= v_set ||
            std::abs(v(neuron_node::output)) >= v_set)
            return false;
    }
    return true;
}

void write_neuron_trace_csv(std::ostream& os, const Trace& trace) {
    os << "t_s,v_out_V,v_ctrl_V,i_L_main_A,i_L_ctrl_A,mode_snw1,mode_snw2,state_sm1,state_sm2\n";
    const auto idx = [&](const char* id) {
        const auto it = std::find(trace.inductor_ids.begin(), trace.inductor_ids.end(), id);
        if (it == trace.inductor_ids.end())
            throw ConfigError("trace is not from the neuron netlist");
        return static_cast<Eigen::Index>(it - trace.inductor_ids.begin());
    };
    const Eigen::Index k_main = idx("L_nw2");
    const Eigen::Index k_ctrl = idx("L_nw1");
    char num[40];
    auto put = [&](double v) {
        std::snprintf(num, sizeof num, "%.17g", v);
        os << num;
    };
    for (std::size_t i = 0; i < trace.size(); ++i) {
        const Mode& m = trace.mode_at(i);
        put(trace.t[i]);
        os << ',';
        put(trace.node_v[i](neuron_node::output));
        os << ',';
        put(trace.node_v[i](neuron_node::control));
        os << ',';
        put(trace.x_full[i](k_main));
        os << ',';
        put(trace.x_full[i](k_ctrl));
        os << ',' << to_string(m.snw("snw1")) << ',' << to_string(m.snw("snw2")) << ','
           << to_string(m.sm("sm1")) << ',' << to_string(m.sm("sm2")) << '\n';
    }
}

} // namespace cryospike
