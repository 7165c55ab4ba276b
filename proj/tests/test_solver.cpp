#include "doctest.h"

#include <cmath>
#include <sstream>
#include <vector>

#include <Eigen/Dense>

#include "cryospike/analysis.hpp"
#include "cryospike/oscillator.hpp"
#include "cryospike/solver.hpp"

using namespace cryospike;

namespace {

/// Source feeding a parallel RL pair: i_L(t) = i0 (1 - exp(-t R / L)).
Netlist rl_cell(double ohms, double henries) {
    Netlist nl;
    const int a = nl.add_node();
    nl.add_current_source("i0", 0, a);
    nl.add_resistor("r", a, 0, ohms);
    nl.add_inductor("l", a, 0, henries);
    return nl;
}

} // namespace

TEST_CASE("a driven RL cell follows its closed-form exponential exactly") {
    const double r = 1.0, l = 1e-6, i0 = 1e-3;
    const Netlist nl = rl_cell(r, l);
    Eigen::VectorXd u(1), x0(1);
    u << i0;
    x0 << 0.0;
    ToleranceSpec tol;
    tol.sample_interval = 1e-8;
    const RunResult rr = run_hybrid(nl, nl.default_mode(), x0, Schedule(u), 5e-6, tol);
    const std::vector<double> il = rr.trace.inductor_current("l");
    for (std::size_t i = 0; i < rr.trace.size(); ++i) {
        const double expect = i0 * (1.0 - std::exp(-rr.trace.t[i] * r / l));
        CHECK(il[i] == doctest::Approx(expect).epsilon(1e-9));
    }
    CHECK(rr.final_time == 5e-6);
    CHECK(rr.transition_count == 0);
}

TEST_CASE("sample times are strictly increasing and cover the grid") {
    const Netlist nl = rl_cell(1.0, 1e-6);
    Eigen::VectorXd u(1), x0(1);
    u << 1e-3;
    x0 << 0.0;
    ToleranceSpec tol;
    tol.sample_interval = 1e-7;
    const RunResult rr = run_hybrid(nl, nl.default_mode(), x0, Schedule(u), 1e-6, tol);
    REQUIRE(rr.trace.size() >= 11);
    for (std::size_t i = 1; i < rr.trace.size(); ++i) CHECK(rr.trace.t[i] > rr.trace.t[i - 1]);
    CHECK(rr.trace.t.front() == 0.0);
    CHECK(rr.trace.t.back() == 1e-6);
}

TEST_CASE("a source step keeps the resistor-shunted inductor current continuous") {
    const Netlist nl = rl_cell(1.0, 1e-6);
    Eigen::VectorXd u0(1), u1(1), x0(1);
    u0 << 1e-3;
    u1 << 2e-3;
    x0 << 0.0;
    Schedule sched(u0);
    sched.add_step(2e-6, u1);
    ToleranceSpec tol;
    tol.sample_interval = 1e-8;
    const RunResult rr = run_hybrid(nl, nl.default_mode(), x0, sched, 4e-6, tol);
    const std::vector<double> il = rr.trace.inductor_current("l");
    std::size_t at = 0;
    for (std::size_t i = 0; i < rr.trace.size(); ++i)
        if (rr.trace.t[i] == 2e-6) at = i;
    REQUIRE(at > 0);
    /// A resistive node absorbs the step, so no flux impulse hits the inductor.
    CHECK(il[at] == doctest::Approx(il[at - 1]).epsilon(1e-4));
    /// Two exact segments: rise toward 1 mA for 2 tau, then decay of the
    /// remaining gap to 2 mA over another 2 tau.
    const double at_step = 1e-3 * (1.0 - std::exp(-2.0));
    const double expected = 2e-3 - (2e-3 - at_step) * std::exp(-2.0);
    CHECK(il.back() == doctest::Approx(expected).epsilon(1e-6));
}

TEST_CASE("schedules reject non-increasing or mis-shaped steps") {
    Eigen::VectorXd u(1), w(2);
    u << 1.0;
    w << 1.0, 2.0;
    Schedule sched(u);
    CHECK_THROWS_AS(sched.add_step(0.0, u), ConfigError);
    sched.add_step(1.0, u);
    CHECK_THROWS_AS(sched.add_step(1.0, u), ConfigError);
    CHECK_THROWS_AS(sched.add_step(2.0, w), DimensionError);
    CHECK(sched.value_at(0.5)[0] == 1.0);
    CHECK(sched.breakpoints_in(0.0, 2.0) == std::vector<double>{1.0});
}

TEST_CASE("located nanowire transitions match the closed-form period") {
    for (const double shunt : {98e-3, 14.4e-3}) {
        OscillatorConfig cfg;
        cfg.shunt_resistance = shunt;
        const double period = oscillator_period(cfg);
        const RunResult rr = run_oscillator(cfg, 20.0 * period);
        std::vector<double> fires;
        for (const Event& e : rr.trace.events)
            if (e.device == "snw" && e.to == "R") fires.push_back(e.t);
        REQUIRE(fires.size() >= 10);
        for (std::size_t i = 2; i < fires.size(); ++i)
            CHECK(fires[i] - fires[i - 1] == doctest::Approx(period).epsilon(1e-7));
    }
}

TEST_CASE("samples taken at a transition instant hold the post-transition mode") {
    const OscillatorConfig cfg;
    const RunResult rr = run_oscillator(cfg, 300e-9);
    REQUIRE(!rr.trace.events.empty());
    const Event& first = rr.trace.events.front();
    bool found = false;
    for (std::size_t i = 0; i < rr.trace.size(); ++i) {
        if (rr.trace.t[i] != first.t) continue;
        found = true;
        CHECK(to_string(rr.trace.mode_at(i).snw("snw")) == first.to);
    }
    CHECK(found);
}

TEST_CASE("the transition cap turns a healthy oscillation into a Zeno failure") {
    const OscillatorConfig cfg;
    ToleranceSpec tol;
    tol.event_cap = 5;
    CHECK_THROWS_AS(run_oscillator(cfg, 2e-6, tol), ZenoError);
}

TEST_CASE("transition logs serialize one JSON object per line") {
    const OscillatorConfig cfg;
    const RunResult rr = run_oscillator(cfg, 300e-9);
    std::ostringstream os;
    write_events_jsonl(os, rr.trace);
    std::istringstream is(os.str());
    std::string line;
    std::size_t lines = 0;
    while (std::getline(is, line)) {
        CHECK(line.find("{\"t\":") == 0);
        CHECK(line.find("\"device\":\"snw\"") != std::string::npos);
        ++lines;
    }
    CHECK(lines == rr.trace.events.size());
}

TEST_CASE("tolerance settings reject non-positive values") {
    ToleranceSpec tol;
    tol.sample_interval = 0.0;
    CHECK_THROWS_AS(tol.validate(), ConfigError);
    tol = ToleranceSpec{};
    tol.event_time = -1.0;
    CHECK_THROWS_AS(tol.validate(), ConfigError);
}
