#include "doctest.h"

#include <Eigen/Dense>

#include "cryospike/linear_system.hpp"
#include "cryospike/neuron.hpp"

using namespace cryospike;

namespace {

Eigen::Vector3d spiking_drive() { return {59e-6, 6e-6, 0.0}; }

} // namespace

TEST_CASE("netlist rejects structural mistakes as they are made") {
    Netlist nl;
    const int a = nl.add_node();
    CHECK_THROWS_AS(nl.add_resistor("r", a, 7, 1.0), ConfigError);
    nl.add_resistor("r", a, 0, 1.0);
    CHECK_THROWS_AS(nl.add_resistor("r", a, 0, 1.0), ConfigError);
    CHECK_THROWS_AS(nl.add_inductor("l", a, 0, 0.0), ConfigError);
    CHECK_THROWS_AS(nl.element("ghost"), ConfigError);
}

TEST_CASE("a node no element touches fails validation") {
    Netlist nl;
    const int a = nl.add_node();
    nl.add_node();
    nl.add_current_source("i", 0, a);
    nl.add_resistor("r", a, 0, 1.0);
    CHECK_THROWS_AS(nl.validate(), AssemblyError);
}

TEST_CASE("the neuron netlist wires three sources and four inductors") {
    const Netlist nl = build_neuron(NeuronConfig{});
    nl.validate();
    CHECK(nl.node_count() == 9);
    CHECK(nl.source_ids() == std::vector<std::string>{"i_bias", "i_in", "i_gate"});
    CHECK(nl.inductor_ids() == std::vector<std::string>{"L_c1", "L_c2", "L_nw1", "L_nw2"});
    CHECK(nl.device("htron").kind() == DeviceKind::Cryotron);
    CHECK(nl.device("snw1").kind() == DeviceKind::Nanowire);
    CHECK(nl.device("sm2").kind() == DeviceKind::Memristor);
}

TEST_CASE("lossless coupling drops the series resistor nodes") {
    NeuronConfig cfg;
    cfg.coupling_resistance = 0.0;
    const Netlist nl = build_neuron(cfg);
    nl.validate();
    CHECK(nl.node_count() == 7);
    CHECK_FALSE(nl.has_element("R_c1"));
}

TEST_CASE("every mode compiles to three states and satisfies KCL everywhere") {
    const Netlist nl = build_neuron(NeuronConfig{});
    const Eigen::VectorXd u = spiking_drive();
    Eigen::VectorXd z(3);
    z << 31e-6, -4e-6, 12e-6;
    const auto snw_of = [](int i) {
        return i ? SnwState::Resistive : SnwState::Superconducting;
    };
    const auto sm_of = [](int i) { return i ? SmState::HRS : SmState::LRS; };
    int modes = 0;
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            for (int g = 0; g < 2; ++g)
                for (int c = 0; c < 2; ++c)
                    for (int d = 0; d < 2; ++d) {
                        const Mode mode = neuron_mode(snw_of(a), snw_of(b), g == 1,
                                                      sm_of(c), sm_of(d));
                        const LinearSystem sys = build_mode_system(nl, mode);
                        CHECK(sys.n() == 3);
                        CHECK(sys.full_count() == 4);
                        CHECK(kcl_residual(nl, sys, z, u) < 1e-9);
                        const Eigen::VectorXd xf = sys.full_currents(z, u);
                        CHECK((sys.constraint_C * xf - sys.constraint_F * u)
                                  .cwiseAbs()
                                  .maxCoeff() < 1e-12);
                        ++modes;
                    }
    CHECK(modes == 32);
}

TEST_CASE("the bias cut-set forces the two coupling legs to share the source") {
    const Netlist nl = build_neuron(NeuronConfig{});
    const Mode mode = neuron_mode(SnwState::Superconducting, SnwState::Superconducting, false,
                                  SmState::HRS, SmState::HRS);
    const LinearSystem sys = build_mode_system(nl, mode);
    const Eigen::VectorXd u = spiking_drive();
    Eigen::VectorXd z(3);
    z << 20e-6, 5e-6, 9e-6;
    const Eigen::VectorXd xf = sys.full_currents(z, u);
    const double leg1 = xf[0];
    const double leg2 = xf[1];
    CHECK(leg1 + leg2 == doctest::Approx(59e-6).epsilon(1e-12));
}

TEST_CASE("quiescent bias splits evenly across the symmetric legs") {
    const NeuronConfig cfg;
    const Eigen::VectorXd x0 = init_bias_split(cfg, 59e-6);
    REQUIRE(x0.size() == 4);
    for (int i = 0; i < 4; ++i) CHECK(x0[i] == doctest::Approx(29.5e-6).epsilon(1e-9));

    NeuronConfig lossless = cfg;
    lossless.coupling_resistance = 0.0;
    const Eigen::VectorXd y0 = init_bias_split(lossless, 59e-6);
    REQUIRE(y0.size() == 4);
    for (int i = 0; i < 4; ++i) CHECK(y0[i] == doctest::Approx(29.5e-6).epsilon(1e-9));
}

TEST_CASE("an asymmetric quiescent split still parks all current in the nanowires") {
    NeuronConfig cfg;
    cfg.control_nanowire.inductance = 14e-9;
    const Eigen::VectorXd x0 = init_bias_split(cfg, 59e-6);
    const Netlist nl = build_neuron(cfg);
    const Mode mode = nl.default_mode();
    const LinearSystem sys = build_mode_system(nl, mode);
    Eigen::VectorXd u(3);
    u << 59e-6, 0.0, 0.0;
    const Eigen::VectorXd z = sys.reduce(x0);
    CHECK(kcl_residual(nl, sys, z, u) < 1e-12);
    // At DC the memristor shunts carry nothing, so each leg current equals
    // its nanowire current and the pair sums to the bias.
    CHECK(x0[0] == doctest::Approx(x0[2]).epsilon(1e-9));
    CHECK(x0[1] == doctest::Approx(x0[3]).epsilon(1e-9));
    CHECK(x0[0] + x0[1] == doctest::Approx(59e-6).epsilon(1e-12));
}

TEST_CASE("the driven gate steers the bias into the main branch") {
    const Netlist nl = build_neuron(NeuronConfig{});
    const Mode mode = neuron_mode(SnwState::Superconducting, SnwState::Superconducting, true,
                                  SmState::HRS, SmState::HRS);
    const LinearSystem sys = build_mode_system(nl, mode);
    Eigen::VectorXd u(3);
    u << 59e-6, 0.0, 20e-6;
    const Eigen::VectorXd z = equilibrium(sys, u);
    const double main_leg = sys.branch_row("L_c2").eval(z, u);
    CHECK(main_leg > 0.9 * 59e-6);
}
