#include "cryospike/solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <ostream>

#include "cryospike/linear_system.hpp"
#include "cryospike/propagator.hpp"

namespace cryospike {

void ToleranceSpec::validate() const {
    if (!(event_time > 0.0) || !(sample_interval > 0.0) || !(min_dwell > 0.0))
        throw ConfigError("tolerances must be positive");
    if (!(guard_rel > 0.0) || max_bisection < 1 || chatter_limit < 1 || event_cap < 1)
        throw ConfigError("tolerances must be positive");
}

Schedule::Schedule(Eigen::VectorXd initial) : initial_(std::move(initial)) {}

void Schedule::add_step(double t, Eigen::VectorXd value) {
    if (!(t > 0.0) || !std::isfinite(t))
        throw ConfigError("schedule step times must be positive and finite");
    if (!steps_.empty() && t <= steps_.back().first)
        throw ConfigError("schedule step times must be strictly increasing");
    if (value.size() != initial_.size())
        throw DimensionError("schedule step has wrong input count");
    steps_.emplace_back(t, std::move(value));
}

const Eigen::VectorXd& Schedule::value_at(double t) const {
    const Eigen::VectorXd* v = &initial_;
    for (const auto& [st, sv] : steps_) {
        if (st <= t)
            v = &sv;
        else
            break;
    }
    return *v;
}

std::vector<double> Schedule::breakpoints_in(double t0, double t1) const {
    std::vector<double> out;
    for (const auto& [st, sv] : steps_)
        if (st > t0 && st < t1) out.push_back(st);
    return out;
}

const Mode& Trace::mode_at(std::size_t i) const {
    return mode_table[static_cast<std::size_t>(mode_index[i])];
}

std::vector<double> Trace::node_voltage(int node) const {
    std::vector<double> out(size());
    for (std::size_t i = 0; i < size(); ++i) out[i] = node_v[i](node);
    return out;
}

std::vector<double> Trace::inductor_current(const std::string& id) const {
    const auto it = std::find(inductor_ids.begin(), inductor_ids.end(), id);
    if (it == inductor_ids.end())
        throw ConfigError("no inductor '" + id + "' in trace");
    const auto k = static_cast<Eigen::Index>(it - inductor_ids.begin());
    std::vector<double> out(size());
    for (std::size_t i = 0; i < size(); ++i) out[i] = x_full[i](k);
    return out;
}

namespace {

/// Crossing condition f >= 0 in the form f = sign * (|)row(z, u)(|) + offset.
struct ActiveGuard {
    std::string device;
    Eigen::RowVectorXd wz;
    Eigen::RowVectorXd wu;
    bool use_abs = false;
    double sign = 1.0;
    double offset = 0.0;
    double vtol = 0.0;
    DeviceState target;

    [[nodiscard]] double eval(const Eigen::VectorXd& z, const Eigen::VectorXd& u) const {
        double v = wz.dot(z) + wu.dot(u);
        if (use_abs) v = std::abs(v);
        return sign * v + offset;
    }
};

struct CompiledMode {
    LinearSystem sys;
    AffinePropagator prop;
    std::vector<ActiveGuard> guards;

    CompiledMode(LinearSystem s, std::vector<ActiveGuard> g)
        : sys(std::move(s)), prop(sys.A), guards(std::move(g)) {}
};

class HybridRun {
public:
    HybridRun(const Netlist& nl, const Schedule& sched, const ToleranceSpec& tol)
        : nl_(nl), sched_(sched), tol_(tol) {
        for (const auto& e : nl.elements())
            if (const auto* sw = std::get_if<SwitchResistor>(&e.body))
                switch_of_[sw->device] = e.id;
        for (const auto& [id, dev] : nl.devices())
            if (!switch_of_.count(id))
                throw AssemblyError("device '" + id + "' has no switch element");
    }

    RunResult run(const Mode& initial_mode, const Eigen::VectorXd& x_full0, double t_end) {
        tol_.validate();
        if (!(t_end > 0.0) || !std::isfinite(t_end))
            throw ConfigError("simulation horizon must be positive and finite");
        if (sched_.inputs() != static_cast<int>(nl_.source_ids().size()))
            throw DimensionError("schedule input count does not match the netlist");
        if (x_full0.size() != static_cast<Eigen::Index>(nl_.inductor_ids().size()))
            throw DimensionError("initial current vector has wrong length");

        trace_.inductor_ids = nl_.inductor_ids();
        trace_.source_ids = nl_.source_ids();
        mode_ = initial_mode;
        u_ = sched_.value_at(0.0);
        cm_ = compile(mode_);
        set_state_from_full(x_full0);
        t_ = anchor_t_ = 0.0;

        sweep(0.0);
        emit_point(0.0);

        const auto bps = sched_.breakpoints_in(0.0, t_end);
        std::size_t bp = 0;
        for (;;) {
            const double seg_end = bp < bps.size() ? bps[bp] : t_end;
            while (auto tev = locate_event(seg_end)) handle_event(*tev);
            emit_grid_below(seg_end);
            move_to(seg_end);
            if (bp >= bps.size()) {
                emit_point(t_end);
                break;
            }
            apply_breakpoint(seg_end);
            ++bp;
        }

        RunResult out;
        out.trace = std::move(trace_);
        out.final_mode = mode_;
        out.final_x_full = cm_->sys.full_currents(z_, u_);
        out.final_time = t_;
        out.transition_count = events_;
        return out;
    }

private:
    std::shared_ptr<CompiledMode> compile(const Mode& mode) {
        auto it = cache_.find(mode.key());
        if (it != cache_.end()) return it->second;

        LinearSystem sys = build_mode_system(nl_, mode);
        std::vector<ActiveGuard> guards;
        for (const auto& [id, dev] : nl_.devices()) {
            const auto& row = sys.branch_row(switch_of_.at(id));
            if (dev.kind() == DeviceKind::Nanowire) {
                const auto& p = dev.snw();
                ActiveGuard g;
                g.device = id;
                g.wz = row.wz;
                g.wu = row.wu;
                g.use_abs = true;
                if (mode.snw(id) == SnwState::Superconducting) {
                    g.sign = 1.0;
                    g.offset = -p.critical_current;
                    g.vtol = p.critical_current * tol_.guard_rel;
                    g.target = SnwState::Resistive;
                } else {
                    g.sign = -1.0;
                    g.offset = p.retrapping_current;
                    g.vtol = p.retrapping_current * tol_.guard_rel;
                    g.target = SnwState::Superconducting;
                }
                guards.push_back(std::move(g));
            } else if (dev.kind() == DeviceKind::Memristor) {
                const auto& p = dev.sm();
                const double r = sm_resistance(mode.sm(id), p);
                ActiveGuard g;
                g.device = id;
                g.wz = row.wz * r;
                g.wu = row.wu * r;
                g.vtol = p.v_set * tol_.guard_rel;
                g.offset = -p.v_set;
                if (mode.sm(id) == SmState::LRS) {
                    g.sign = 1.0;
                    g.target = SmState::HRS;
                } else {
                    g.sign = -1.0;
                    g.target = SmState::LRS;
                }
                guards.push_back(std::move(g));
            }
            // Gate-controlled devices switch only when their gate source steps.
        }
        auto cm = std::make_shared<CompiledMode>(std::move(sys), std::move(guards));
        cache_.emplace(mode.key(), cm);
        return cm;
    }

    void set_state_from_full(const Eigen::VectorXd& x_full) {
        z_ = cm_->sys.reduce(cm_->sys.project_full(x_full, u_));
        drive_ = cm_->sys.B * u_;
    }

    [[nodiscard]] Eigen::VectorXd z_at(double t) const {
        return cm_->prop.advance(z_, drive_, t - anchor_t_);
    }

    void move_to(double t) {
        if (t == t_) return;
        Eigen::VectorXd zn = z_at(t);
        if (!zn.allFinite()) throw NumericError("state diverged", t);
        z_ = std::move(zn);
        t_ = anchor_t_ = t;
    }

    [[nodiscard]] int mode_slot() {
        const std::string key = mode_.key();
        auto it = mode_slots_.find(key);
        if (it != mode_slots_.end()) return it->second;
        const int idx = static_cast<int>(trace_.mode_table.size());
        trace_.mode_table.push_back(mode_);
        mode_slots_.emplace(key, idx);
        return idx;
    }

    void emit(double t, const Eigen::VectorXd& z) {
        Eigen::VectorXd xf = cm_->sys.full_currents(z, u_);
        Eigen::VectorXd nv = cm_->sys.Vz * z + cm_->sys.Vu * u_;
        if (!trace_.t.empty() && t <= trace_.t.back()) {
            trace_.x_full.back() = std::move(xf);
            trace_.node_v.back() = std::move(nv);
            trace_.u.back() = u_;
            trace_.mode_index.back() = mode_slot();
            return;
        }
        trace_.t.push_back(t);
        trace_.x_full.push_back(std::move(xf));
        trace_.node_v.push_back(std::move(nv));
        trace_.u.push_back(u_);
        trace_.mode_index.push_back(mode_slot());
    }

    /// Samples on the regular grid strictly before t_stop, in the current mode.
    void emit_grid_below(double t_stop) {
        for (;;) {
            const double tg = static_cast<double>(next_grid_) * tol_.sample_interval;
            if (tg >= t_stop) return;
            emit(tg, z_at(tg));
            ++next_grid_;
        }
    }

    /// Sample at an instant; consumes any grid point that coincides with it.
    void emit_point(double t) {
        emit(t, z_);
        while (static_cast<double>(next_grid_) * tol_.sample_interval <= t) ++next_grid_;
    }

    void record_instant(double t) {
        if (t - last_instant_ < tol_.min_dwell) {
            if (++chatter_ > tol_.chatter_limit)
                throw ZenoError("mode chatter: " + std::to_string(chatter_) +
                                " transition instants within the dwell floor near t=" +
                                std::to_string(t));
        } else {
            chatter_ = 0;
        }
        last_instant_ = t;
    }

    /// Apply every satisfied transition at instant t, re-deriving the circuit
    /// and re-checking after each one. Returns true if anything fired.
    bool sweep(double t) {
        const int limit = 4 * static_cast<int>(nl_.devices().size()) + 4;
        bool any = false;
        for (int iter = 0;; ++iter) {
            if (iter >= limit)
                throw ZenoError("transitions failed to settle at t=" + std::to_string(t));
            const ActiveGuard* hit = nullptr;
            for (const auto& g : cm_->guards) {
                if (g.eval(z_, u_) >= 0.0) {
                    hit = &g;
                    break;
                }
            }
            if (!hit) break;
            fire(t, hit->device, hit->target);
            any = true;
        }
        if (any) record_instant(t);
        return any;
    }

    void fire(double t, const std::string& device, const DeviceState& target) {
        if (++events_ > tol_.event_cap)
            throw ZenoError("transition cap of " + std::to_string(tol_.event_cap) +
                            " exceeded at t=" + std::to_string(t));
        Event ev;
        ev.t = t;
        ev.device = device;
        ev.from = to_string(mode_.at(device));
        ev.to = to_string(target);
        trace_.events.push_back(std::move(ev));
        const Eigen::VectorXd x_full = cm_->sys.full_currents(z_, u_);
        mode_.set(device, target);
        cm_ = compile(mode_);
        set_state_from_full(x_full);
    }

    [[nodiscard]] bool any_crossed(const Eigen::VectorXd& z) const {
        for (const auto& g : cm_->guards)
            if (g.eval(z, u_) >= 0.0) return true;
        return false;
    }

    /// Earliest transition instant in (t_, seg_end], if any.
    std::optional<double> locate_event(double seg_end) {
        if (cm_->guards.empty() || t_ >= seg_end) return std::nullopt;
        double a = t_;
        double h = tol_.event_time;
        const double cap = cm_->prop.min_time_constant();
        for (;;) {
            const double b = std::min(a + h, seg_end);
            Eigen::VectorXd zb = z_at(b);
            if (!zb.allFinite()) throw NumericError("state diverged", b);
            if (any_crossed(zb)) return bisect(a, b);
            if (b >= seg_end) return std::nullopt;
            a = b;
            h = std::min(h * 2.0, cap);
        }
    }

    /// Shrink (a, b] with no crossing at a and a crossing at b; returns the
    /// refined upper end, which stays on the crossed side.
    double bisect(double a, double b) {
        for (int iter = 0; iter < tol_.max_bisection; ++iter) {
            if (b - a <= tol_.event_time) {
                const Eigen::VectorXd zb = z_at(b);
                bool tight = true;
                for (const auto& g : cm_->guards) {
                    const double f = g.eval(zb, u_);
                    if (f >= 0.0 && f > g.vtol) tight = false;
                }
                if (tight) break;
            }
            const double mid = 0.5 * (a + b);
            if (mid <= a || mid >= b) break;
            if (any_crossed(z_at(mid)))
                b = mid;
            else
                a = mid;
        }
        return b;
    }

    void handle_event(double t) {
        emit_grid_below(t);
        move_to(t);
        sweep(t);
        emit_point(t);
    }

    void apply_breakpoint(double t) {
        emit_grid_below(t);
        move_to(t);
        Eigen::VectorXd x_full = cm_->sys.full_currents(z_, u_);
        const Eigen::VectorXd u_new = sched_.value_at(t);
        x_full += cm_->sys.jump * (u_new - u_);
        u_ = u_new;
        bool gate_changed = false;
        for (const auto& [id, dev] : nl_.devices()) {
            if (dev.kind() != DeviceKind::Cryotron) continue;
            const double ig = u_(nl_.source_index(dev.gate_source));
            const bool on = htron_channel_on(ig, dev.htron());
            if (on == mode_.htron_on(id)) continue;
            if (++events_ > tol_.event_cap)
                throw ZenoError("transition cap of " + std::to_string(tol_.event_cap) +
                                " exceeded at t=" + std::to_string(t));
            Event ev;
            ev.t = t;
            ev.device = id;
            ev.from = to_string(mode_.at(id));
            ev.to = to_string(DeviceState{on});
            trace_.events.push_back(std::move(ev));
            mode_.set(id, on);
            gate_changed = true;
        }
        if (gate_changed) cm_ = compile(mode_);
        set_state_from_full(x_full);
        const bool fired = sweep(t);
        if (gate_changed && !fired) record_instant(t);
        emit_point(t);
    }

    const Netlist& nl_;
    const Schedule& sched_;
    ToleranceSpec tol_;
    std::map<std::string, std::string> switch_of_;
    std::map<std::string, std::shared_ptr<CompiledMode>> cache_;
    std::map<std::string, int> mode_slots_;

    std::shared_ptr<CompiledMode> cm_;
    Mode mode_;
    Eigen::VectorXd u_;
    Eigen::VectorXd drive_;
    Eigen::VectorXd z_;
    double t_ = 0.0;
    double anchor_t_ = 0.0;
    Trace trace_;
    std::uint64_t events_ = 0;
    std::uint64_t next_grid_ = 0;
    int chatter_ = 0;
    double last_instant_ = -std::numeric_limits<double>::infinity();
};

} // namespace

RunResult run_hybrid(const Netlist& nl, const Mode& initial_mode,
                     const Eigen::VectorXd& x_full0, const Schedule& schedule,
                     double t_end, const ToleranceSpec& tol) {
    nl.validate();
    HybridRun run(nl, schedule, tol);
    return run.run(initial_mode, x_full0, t_end);
}

void write_events_jsonl(std::ostream& os, const Trace& trace) {
    char buf[64];
    for (const auto& ev : trace.events) {
        std::snprintf(buf, sizeof buf, "%.17g", ev.t);
        os << "{\"t\":" << buf << ",\"device\":\"" << ev.device << "\",\"from\":\""
           << ev.from << "\",\"to\":\"" << ev.to << "\"}\n";
    }
}

} // namespace cryospike
