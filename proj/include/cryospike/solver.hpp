#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "cryospike/netlist.hpp"

namespace cryospike {

/// Numerical controls for event location and output sampling.
struct ToleranceSpec {
    /// Bisection window for locating transition times [s].
    double event_time = 1e-15;
    /// Output sampling period [s].
    double sample_interval = 1e-10;
    /// Instants closer than this count toward the chatter limit [s].
    double min_dwell = 1e-16;
    /// Hard limit on the total number of device transitions per run.
    std::uint64_t event_cap = 10'000'000;
    /// Relative tolerance on the guard value at a located crossing.
    double guard_rel = 1e-7;
    int max_bisection = 200;
    int chatter_limit = 256;

    void validate() const;
};

/// Piecewise-constant, right-continuous input waveform for every source.
class Schedule {
public:
    explicit Schedule(Eigen::VectorXd initial);

    /// Sources hold `value` from time t onward; t must be positive and
    /// strictly increasing across calls.
    void add_step(double t, Eigen::VectorXd value);

    [[nodiscard]] int inputs() const { return static_cast<int>(initial_.size()); }
    [[nodiscard]] const Eigen::VectorXd& value_at(double t) const;
    /// Step times strictly inside (t0, t1).
    [[nodiscard]] std::vector<double> breakpoints_in(double t0, double t1) const;

private:
    Eigen::VectorXd initial_;
    std::vector<std::pair<double, Eigen::VectorXd>> steps_;
};

/// One device transition, in simulation order.
struct Event {
    double t = 0.0;
    std::string device;
    std::string from;
    std::string to;
};

/// Sampled run output: state, node voltages, inputs and mode per sample plus
/// the full transition log. Sample times are strictly increasing and samples
/// taken at transition instants hold post-transition values.
struct Trace {
    std::vector<double> t;
    std::vector<Eigen::VectorXd> x_full;
    std::vector<Eigen::VectorXd> node_v;
    std::vector<Eigen::VectorXd> u;
    std::vector<int> mode_index;
    std::vector<Mode> mode_table;
    std::vector<Event> events;
    std::vector<std::string> inductor_ids;
    std::vector<std::string> source_ids;

    [[nodiscard]] std::size_t size() const { return t.size(); }
    [[nodiscard]] const Mode& mode_at(std::size_t i) const;
    [[nodiscard]] std::vector<double> node_voltage(int node) const;
    [[nodiscard]] std::vector<double> inductor_current(const std::string& id) const;
};

struct RunResult {
    Trace trace;
    Mode final_mode;
    Eigen::VectorXd final_x_full;
    double final_time = 0.0;
    std::uint64_t transition_count = 0;
};

/// Simulate the piecewise-linear network from t = 0 to t_end.
///
/// x_full0 holds every inductor current in netlist order; it is projected
/// onto the initial mode's cut-set constraints before the run starts. Source
/// steps inside the horizon redistribute inductor currents through the
/// flux-preserving jump map and re-evaluate every gate-controlled device.
[[nodiscard]] RunResult run_hybrid(const Netlist& nl, const Mode& initial_mode,
                                   const Eigen::VectorXd& x_full0,
                                   const Schedule& schedule, double t_end,
                                   const ToleranceSpec& tol = {});

/// One JSON object per transition: {"t":...,"device":...,"from":...,"to":...}.
void write_events_jsonl(std::ostream& os, const Trace& trace);

} // namespace cryospike
