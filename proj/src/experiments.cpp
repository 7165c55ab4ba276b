#include "cryospike/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <limits>
#include <thread>
#include <utility>

#include "cryospike/analysis.hpp"
#include "cryospike/rng.hpp"

namespace cryospike {

std::array<StateCombo, 4> state_combos() {
    return {{{SmState::HRS, SmState::HRS},
             {SmState::HRS, SmState::LRS},
             {SmState::LRS, SmState::HRS},
             {SmState::LRS, SmState::LRS}}};
}

std::string combo_label(const StateCombo& combo) {
    const auto name = [](SmState s) { return s == SmState::HRS ? "HRS" : "LRS"; };
    return std::string(name(combo.control)) + "-" + name(combo.main);
}

SpikeMetrics measure_spiking(const NeuronConfig& cfg, const SpikingSetup& setup, double t_end,
                             const ToleranceSpec& tol) {
    return reduce_spiking(cfg, run_spiking(cfg, setup, t_end, tol), t_end);
}

SpikeMetrics reduce_spiking(const NeuronConfig& cfg, const RunResult& rr, double t_end) {
    const double v_set = std::min(cfg.control_memristor.v_set, cfg.main_memristor.v_set);
    if (!verify_no_spurious_programming(rr.trace, v_set))
        throw ProgrammingError("spiking run disturbed a memristor state");

    const std::vector<double> vout = rr.trace.node_voltage(neuron_node::output);
    std::vector<double> t2, v2;
    for (std::size_t i = 0; i < rr.trace.size(); ++i) {
        if (rr.trace.t[i] >= 0.5 * t_end) {
            t2.push_back(rr.trace.t[i]);
            v2.push_back(vout[i]);
        }
    }
    const std::vector<Spike> spikes = detect_spikes(t2, v2);

    SpikeMetrics m;
    m.spike_count = static_cast<int>(spikes.size());
    m.frequency = spike_frequency(spikes);
    const double base = waveform_baseline(v2);
    m.amplitude = spike_amplitude(spikes, base);
    double level = 0.0;
    for (const Spike& s : spikes) level += s.v;
    m.peak_level = level / static_cast<double>(spikes.size());
    const Netlist nl = build_neuron(cfg);
    m.avg_power = average_source_power(nl, rr.trace, spikes.front().t, spikes.back().t);
    m.energy = energy_per_spike(m.avg_power, m.frequency);
    return m;
}

namespace {

const char* const kSweepParameters[] = {
    "bias_current",        "input_current",       "critical_current", "retrapping_current",
    "nanowire_inductance", "orientation_deg",     "coupling_inductance",
};

bool known_parameter(const std::string& name) {
    for (const char* p : kSweepParameters)
        if (name == p) return true;
    return false;
}

} // namespace

void SweepSpec::validate() const {
    base.validate();
    if (!known_parameter(parameter))
        throw ConfigError("unknown sweep parameter \"" + parameter + "\"");
    if (values.empty()) throw ConfigError("sweep needs at least one value");
    for (std::size_t i = 1; i < values.size(); ++i) {
        if (values[i] == values[i - 1] ||
            (values[i] > values[i - 1]) != (values[1] > values[0]))
            throw ConfigError("sweep values must be strictly monotone");
    }
    if (combos.empty()) throw ConfigError("sweep needs at least one state combination");
    if (!(t_end > 0.0)) throw ConfigError("sweep run length must be positive");
}

void apply_parameter(NeuronConfig& cfg, SpikingSetup& setup, const std::string& parameter,
                     double value) {
    if (parameter == "bias_current") {
        setup.bias_current = value;
    } else if (parameter == "input_current") {
        setup.input_current = value;
    } else if (parameter == "critical_current") {
        cfg.control_nanowire.critical_current = value;
        cfg.main_nanowire.critical_current = value;
    } else if (parameter == "retrapping_current") {
        cfg.control_nanowire.retrapping_current = value;
        cfg.main_nanowire.retrapping_current = value;
    } else if (parameter == "nanowire_inductance") {
        cfg.control_nanowire.inductance = value;
        cfg.main_nanowire.inductance = value;
    } else if (parameter == "orientation_deg") {
        cfg.set_orientation(value);
    } else if (parameter == "coupling_inductance") {
        cfg.coupling_inductance = value;
    } else {
        throw ConfigError("unknown sweep parameter \"" + parameter + "\"");
    }
}

std::vector<SweepRow> run_sweep(const SweepSpec& spec) {
    spec.validate();
    std::vector<SweepRow> rows;
    rows.reserve(spec.values.size() * spec.combos.size());
    for (double value : spec.values) {
        for (const StateCombo& combo : spec.combos) {
            SweepRow row;
            row.value = value;
            row.combo = combo;
            NeuronConfig cfg = spec.base;
            SpikingSetup setup = spec.setup;
            setup.control_state = combo.control;
            setup.main_state = combo.main;
            try {
                apply_parameter(cfg, setup, spec.parameter, value);
                row.metrics = measure_spiking(cfg, setup, spec.t_end, spec.tol);
                row.ok = true;
            } catch (const Error& e) {
                row.error = e.what();
            }
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

namespace {

/// The window predicate: at least 4 detected spikes inside a forced 10 us run.
bool sustains_spiking(const NeuronConfig& cfg, const StateCombo& combo, double bias,
                      double input_current, const ToleranceSpec& tol) {
    SpikingSetup setup;
    setup.control_state = combo.control;
    setup.main_state = combo.main;
    setup.bias_current = bias;
    setup.input_current = input_current;
    try {
        const RunResult rr = run_spiking(cfg, setup, 10e-6, tol);
        const std::vector<double> vout = rr.trace.node_voltage(neuron_node::output);
        return detect_spikes(rr.trace.t, vout).size() >= 4;
    } catch (const Error&) {
        return false;
    }
}

} // namespace

BiasWindow find_bias_window(const NeuronConfig& cfg, const StateCombo& combo,
                            double input_current, const ToleranceSpec& tol) {
    cfg.validate();
    constexpr double kStep = 0.01e-6;
    const double latch =
        cfg.control_nanowire.critical_current + cfg.main_nanowire.critical_current;
    BiasWindow w;
    const double upper = latch - kStep;
    if (!sustains_spiking(cfg, combo, upper, input_current, tol)) return w;
    if (sustains_spiking(cfg, combo, 0.0, input_current, tol)) {
        w.lower = 0.0;
        w.upper = upper;
        w.empty = false;
        return w;
    }
    double lo = 0.0, hi = upper;
    while (hi - lo > kStep) {
        const double mid = 0.5 * (lo + hi);
        if (sustains_spiking(cfg, combo, mid, input_current, tol))
            hi = mid;
        else
            lo = mid;
    }
    w.lower = hi;
    w.upper = upper;
    w.empty = false;
    return w;
}

ReconfigReport reconfigurability_study(const NeuronConfig& cfg, double input_current,
                                       const ToleranceSpec& tol) {
    ReconfigReport rep;
    std::vector<double> pooled;
    for (const StateCombo& combo : state_combos()) {
        ReconfigReport::ComboRange range;
        range.combo = combo;
        range.window = find_bias_window(cfg, combo, input_current, tol);
        if (!range.window.empty) {
            const double mid = 0.5 * (range.window.lower + range.window.upper);
            for (double bias : {range.window.lower, mid, range.window.upper}) {
                SpikingSetup setup;
                setup.control_state = combo.control;
                setup.main_state = combo.main;
                setup.bias_current = bias;
                setup.input_current = input_current;
                range.frequencies.push_back(measure_spiking(cfg, setup, 30e-6, tol).frequency);
            }
            pooled.insert(pooled.end(), range.frequencies.begin(), range.frequencies.end());
            if (combo.control == SmState::HRS && combo.main == SmState::HRS)
                rep.fixed_ratio = reconfigurability_ratio(range.frequencies);
        }
        rep.ranges.push_back(std::move(range));
    }
    if (!(rep.fixed_ratio > 0.0))
        throw RegimeError("the fixed high-resistance baseline never spikes; "
                          "no reconfigurability comparison is possible");
    rep.programmable_ratio = reconfigurability_ratio(pooled);
    rep.improvement = rep.programmable_ratio / rep.fixed_ratio - 1.0;
    return rep;
}

std::vector<OrientationPoint> orientation_study(const NeuronConfig& cfg,
                                                const std::vector<double>& angles,
                                                const SpikingSetup& setup,
                                                const ToleranceSpec& tol) {
    if (angles.empty()) throw ConfigError("orientation study needs at least one angle");
    std::vector<OrientationPoint> points;
    points.reserve(angles.size());
    for (double angle : angles) {
        NeuronConfig tuned = cfg;
        tuned.set_orientation(angle);
        OrientationPoint pt;
        pt.angle_deg = angle;
        for (const StateCombo& combo : state_combos()) {
            SpikingSetup s = setup;
            s.control_state = combo.control;
            s.main_state = combo.main;
            const SpikeMetrics m = measure_spiking(tuned, s, 20e-6, tol);
            pt.frequencies.push_back(m.frequency);
            pt.powers.push_back(m.avg_power);
        }
        pt.max_frequency = *std::max_element(pt.frequencies.begin(), pt.frequencies.end());
        pt.min_frequency = *std::min_element(pt.frequencies.begin(), pt.frequencies.end());
        pt.power_range = *std::max_element(pt.powers.begin(), pt.powers.end()) -
                         *std::min_element(pt.powers.begin(), pt.powers.end());
        points.push_back(std::move(pt));
    }
    return points;
}

void McSpec::validate() const {
    base.validate();
    if (samples < 1) throw ConfigError("Monte Carlo needs at least one sample");
    if (bias_points.empty()) throw ConfigError("Monte Carlo needs at least one bias point");
    if (!(t_end > 0.0)) throw ConfigError("Monte Carlo run length must be positive");
    for (double s : {sigma_critical_current, sigma_retrapping_current,
                     sigma_nanowire_inductance, sigma_r_hrs, sigma_r_lrs})
        if (!(s >= 0.0)) throw ConfigError("Monte Carlo sigma must be nonnegative");
    if (redraw_cap < 1) throw ConfigError("Monte Carlo redraw cap must be positive");
}

namespace {

/// One Gaussian draw truncated to mean +- 3 sigma by redraw.
double draw_truncated(double mean, double sigma, RandomStream& rng, int cap) {
    int rejects = 0;
    for (;;) {
        const double z = rng.normal();
        if (std::abs(z) <= 3.0) return mean + sigma * z;
        if (++rejects >= cap)
            throw SamplingError("parameter draw rejected past the redraw cap");
    }
}

} // namespace

McAssignment sample_parameters(const McSpec& spec, RandomStream& rng) {
    const double k = spec.values_are_3sigma ? 1.0 / 3.0 : 1.0;
    const double mean_ic[2] = {spec.base.control_nanowire.critical_current,
                               spec.base.main_nanowire.critical_current};
    const double mean_ir[2] = {spec.base.control_nanowire.retrapping_current,
                               spec.base.main_nanowire.retrapping_current};
    const double mean_l[2] = {spec.base.control_nanowire.inductance,
                              spec.base.main_nanowire.inductance};
    const double mean_rh[2] = {spec.base.control_memristor.r_hrs,
                               spec.base.main_memristor.r_hrs};
    const double mean_rl[2] = {spec.base.control_memristor.r_lrs,
                               spec.base.main_memristor.r_lrs};

    // Shared mode applies one z-draw per parameter to both branch means;
    // per-device mode draws the control branch first, then the main branch.
    const auto fill = [&](double sigma, const double mean[2], double out[2]) {
        if (spec.per_device) {
            out[0] = draw_truncated(mean[0], k * sigma, rng, spec.redraw_cap);
            out[1] = draw_truncated(mean[1], k * sigma, rng, spec.redraw_cap);
        } else {
            const double shift = draw_truncated(0.0, k * sigma, rng, spec.redraw_cap);
            out[0] = mean[0] + shift;
            out[1] = mean[1] + shift;
        }
    };

    for (int attempt = 0; attempt < spec.redraw_cap; ++attempt) {
        McAssignment a;
        fill(spec.sigma_critical_current, mean_ic, a.critical_current);
        fill(spec.sigma_retrapping_current, mean_ir, a.retrapping_current);
        fill(spec.sigma_nanowire_inductance, mean_l, a.nanowire_inductance);
        fill(spec.sigma_r_hrs, mean_rh, a.r_hrs);
        fill(spec.sigma_r_lrs, mean_rl, a.r_lrs);
        bool ok = true;
        for (int d = 0; d < 2; ++d)
            ok = ok && a.critical_current[d] > a.retrapping_current[d] &&
                 a.r_hrs[d] > a.r_lrs[d];
        if (ok) return a;
    }
    throw SamplingError("no parameter assignment satisfied I_c > I_r and "
                        "R_HRS > R_LRS within the redraw cap");
}

SampleStats summarize(const std::vector<double>& samples) {
    std::vector<double> finite;
    finite.reserve(samples.size());
    for (double s : samples)
        if (std::isfinite(s)) finite.push_back(s);
    SampleStats st;
    st.count = static_cast<int>(finite.size());
    if (finite.empty()) return st;
    st.mean = mean_of(finite);
    st.std_dev = population_std(finite);
    st.min = *std::min_element(finite.begin(), finite.end());
    st.max = *std::max_element(finite.begin(), finite.end());
    return st;
}

namespace {

int thread_cap() {
    if (const char* env = std::getenv("CRYOSPIKE_THREADS")) {
        char* end = nullptr;
        const long n = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && n > 0) return static_cast<int>(n);
    }
    const unsigned hc = std::thread::hardware_concurrency();
    return hc ? static_cast<int>(hc) : 1;
}

/// Index-addressed parallel loop; exceptions rethrow at the smallest index.
template <typename Body>
void parallel_for(int n, const Body& body) {
    const int workers = std::min(thread_cap(), n);
    if (workers <= 1) {
        for (int i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(n));
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                const int i = next.fetch_add(1);
                if (i >= n) return;
                try {
                    body(i);
                } catch (...) {
                    errors[static_cast<std::size_t>(i)] = std::current_exception();
                }
            }
        });
    }
    for (std::thread& th : pool) th.join();
    for (const std::exception_ptr& e : errors)
        if (e) std::rethrow_exception(e);
}

NeuronConfig apply_assignment(const NeuronConfig& base, const McAssignment& a) {
    NeuronConfig cfg = base;
    SnwParams* nw[2] = {&cfg.control_nanowire, &cfg.main_nanowire};
    SmParams* sm[2] = {&cfg.control_memristor, &cfg.main_memristor};
    for (int d = 0; d < 2; ++d) {
        nw[d]->critical_current = a.critical_current[d];
        nw[d]->retrapping_current = a.retrapping_current[d];
        nw[d]->inductance = a.nanowire_inductance[d];
        sm[d]->r_hrs = a.r_hrs[d];
        sm[d]->r_lrs = a.r_lrs[d];
    }
    return cfg;
}

std::string format_bias_uA(double bias) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%g", bias * 1e6);
    return buf;
}

} // namespace

McReport run_monte_carlo(const McSpec& spec) {
    spec.validate();
    ToleranceSpec tol;
    tol.sample_interval = 1e-9;

    McReport rep;
    rep.spec = spec;

    // Order the combos by nominal frequency at the first bias point so the
    // scatter bands and the substream point indices are both canonical.
    const std::array<StateCombo, 4> combos = state_combos();
    std::array<double, 4> nominal{};
    for (std::size_t i = 0; i < combos.size(); ++i) {
        SpikingSetup setup;
        setup.control_state = combos[i].control;
        setup.main_state = combos[i].main;
        setup.bias_current = spec.bias_points.front();
        setup.input_current = spec.input_current;
        nominal[i] = measure_spiking(spec.base, setup, spec.t_end, tol).frequency;
    }
    std::array<std::size_t, 4> order{0, 1, 2, 3};
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return nominal[a] < nominal[b]; });
    for (std::size_t i : order) rep.combo_order.push_back(combos[i]);

    const int n_bias = static_cast<int>(spec.bias_points.size());
    for (int ci = 0; ci < 4; ++ci) {
        for (int bi = 0; bi < n_bias; ++bi) {
            const int point = ci * n_bias + bi;
            McCell cell;
            cell.combo = rep.combo_order[static_cast<std::size_t>(ci)];
            cell.bias_current = spec.bias_points[static_cast<std::size_t>(bi)];
            cell.frequencies.assign(static_cast<std::size_t>(spec.samples),
                                    std::numeric_limits<double>::quiet_NaN());
            cell.peak_levels.assign(static_cast<std::size_t>(spec.samples),
                                    std::numeric_limits<double>::quiet_NaN());
            std::vector<std::string> errors(static_cast<std::size_t>(spec.samples));

            parallel_for(spec.samples, [&](int trial) {
                RandomStream rng(spec.seed, static_cast<std::uint64_t>(point),
                                 static_cast<std::uint64_t>(trial));
                try {
                    const McAssignment a = sample_parameters(spec, rng);
                    const NeuronConfig cfg = apply_assignment(spec.base, a);
                    SpikingSetup setup;
                    setup.control_state = cell.combo.control;
                    setup.main_state = cell.combo.main;
                    setup.bias_current = cell.bias_current;
                    setup.input_current = spec.input_current;
                    const SpikeMetrics m = measure_spiking(cfg, setup, spec.t_end, tol);
                    cell.frequencies[static_cast<std::size_t>(trial)] = m.frequency;
                    cell.peak_levels[static_cast<std::size_t>(trial)] = m.peak_level;
                } catch (const Error& e) {
                    errors[static_cast<std::size_t>(trial)] = e.what();
                }
            });

            for (int trial = 0; trial < spec.samples; ++trial)
                if (!errors[static_cast<std::size_t>(trial)].empty())
                    cell.failures.push_back({trial, errors[static_cast<std::size_t>(trial)]});
            cell.frequency_stats = summarize(cell.frequencies);
            cell.peak_level_stats = summarize(cell.peak_levels);
            rep.cells.push_back(std::move(cell));
        }
    }

    const auto finite_of = [](const std::vector<double>& xs) {
        std::vector<double> out;
        out.reserve(xs.size());
        for (double x : xs)
            if (std::isfinite(x)) out.push_back(x);
        return out;
    };
    const auto cell_at = [&](int ci, int bi) -> const McCell& {
        return rep.cells[static_cast<std::size_t>(ci * n_bias + bi)];
    };
    for (int bi = 0; bi < n_bias; ++bi) {
        const std::string at = format_bias_uA(spec.bias_points[static_cast<std::size_t>(bi)]);
        for (int a = 0; a < 4; ++a) {
            for (int b = a + 1; b < 4; ++b) {
                const std::vector<double> fa = finite_of(cell_at(a, bi).frequencies);
                const std::vector<double> fb = finite_of(cell_at(b, bi).frequencies);
                if (fa.empty() || fb.empty()) continue;
                rep.overlaps.push_back({"freq|" + combo_label(cell_at(a, bi).combo) + "|" +
                                            combo_label(cell_at(b, bi).combo) + "|" + at + " uA",
                                        histogram_overlap(fa, fb)});
            }
        }
        std::vector<double> amp_hrs, amp_lrs;
        for (int ci = 0; ci < 4; ++ci) {
            const McCell& c = cell_at(ci, bi);
            std::vector<double>& pool = c.combo.main == SmState::HRS ? amp_hrs : amp_lrs;
            const std::vector<double> finite = finite_of(c.peak_levels);
            pool.insert(pool.end(), finite.begin(), finite.end());
        }
        if (!amp_hrs.empty() && !amp_lrs.empty())
            rep.overlaps.push_back({"amp|sm2-HRS|sm2-LRS|" + at + " uA",
                                    histogram_overlap(amp_hrs, amp_lrs)});
    }
    return rep;
}

} // namespace cryospike
