#include "cryospike/oscillator.hpp"

#include "cryospike/analysis.hpp"

namespace cryospike {

void OscillatorConfig::validate() const {
    nanowire.validate();
    if (!(shunt_resistance > 0.0)) throw ConfigError("shunt resistance must be positive");
    if (!(bias_current > 0.0)) throw ConfigError("bias current must be positive");
}

Netlist build_oscillator(const OscillatorConfig& cfg) {
    cfg.validate();
    Netlist nl;
    const int n1 = nl.add_node();
    const int n2 = nl.add_node();
    nl.add_current_source("i_bias", 0, n1);
    nl.add_resistor("r_shunt", n1, 0, cfg.shunt_resistance);
    nl.add_inductor("L_nw", n1, n2, cfg.nanowire.inductance);
    nl.add_nanowire("snw", cfg.nanowire);
    nl.add_switch("sw_snw", n2, 0, "snw");
    nl.validate();
    return nl;
}

double oscillator_period(const OscillatorConfig& cfg) {
    cfg.validate();
    return oscillator_period_analytic(cfg.nanowire, cfg.shunt_resistance, cfg.bias_current);
}

RunResult run_oscillator(const OscillatorConfig& cfg, double t_end, const ToleranceSpec& tol) {
    const Netlist nl = build_oscillator(cfg);
    Mode mode;
    mode.set("snw", SnwState::Superconducting);
    Eigen::VectorXd x0(1);
    x0 << cfg.nanowire.retrapping_current;
    Eigen::VectorXd u(1);
    u << cfg.bias_current;
    return run_hybrid(nl, mode, x0, Schedule(u), t_end, tol);
}

} // namespace cryospike
