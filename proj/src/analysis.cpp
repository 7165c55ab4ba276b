#include "cryospike/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace cryospike {

double waveform_baseline(const std::vector<double>& v) {
    if (v.empty()) throw ConfigError("cannot take the baseline of an empty waveform");
    std::vector<double> s = v;
    const std::size_t mid = s.size() / 2;
    std::nth_element(s.begin(), s.begin() + static_cast<std::ptrdiff_t>(mid), s.end());
    const double upper = s[mid];
    if (s.size() % 2 == 1) return upper;
    const double lower = *std::max_element(s.begin(), s.begin() + static_cast<std::ptrdiff_t>(mid));
    return 0.5 * (lower + upper);
}

std::vector<Spike> detect_spikes(const std::vector<double>& t, const std::vector<double>& v) {
    if (t.size() != v.size()) throw DimensionError("time and waveform lengths differ");
    std::vector<Spike> spikes;
    if (v.empty()) return spikes;
    const double baseline = waveform_baseline(v);
    const double vmax = *std::max_element(v.begin(), v.end());
    const double swing = vmax - baseline;
    if (swing < 1e-9) return spikes;
    const double arm_level = baseline + 0.5 * swing;
    const double release_level = baseline + 0.25 * swing;
    bool armed = false;
    std::size_t peak = 0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!armed) {
            if (v[i] >= arm_level) {
                armed = true;
                peak = i;
            }
        } else {
            if (v[i] > v[peak]) peak = i;
            if (v[i] <= release_level) {
                spikes.push_back({t[peak], v[peak]});
                armed = false;
            }
        }
    }
    return spikes;
}

double spike_frequency(const std::vector<Spike>& spikes) {
    if (spikes.size() < 3)
        throw InsufficientSpikesError("need at least 3 spikes for a frequency, got " +
                                      std::to_string(spikes.size()));
    const double span = spikes.back().t - spikes[1].t;
    if (!(span > 0.0)) throw InsufficientSpikesError("spike times do not advance");
    return static_cast<double>(spikes.size() - 2) / span;
}

double spike_amplitude(const std::vector<Spike>& spikes, double baseline) {
    if (spikes.empty()) throw InsufficientSpikesError("no spikes to take an amplitude from");
    double sum = 0.0;
    for (const auto& s : spikes) sum += s.v - baseline;
    return sum / static_cast<double>(spikes.size());
}

double firing_rate(const Trace& trace, const std::string& device) {
    std::vector<double> times;
    for (const auto& ev : trace.events)
        if (ev.device == device && ev.to == to_string(SnwState::Resistive))
            times.push_back(ev.t);
    if (times.size() < 3)
        throw InsufficientSpikesError("need at least 3 firings of '" + device + "', got " +
                                      std::to_string(times.size()));
    const double span = times.back() - times[1];
    if (!(span > 0.0)) throw InsufficientSpikesError("firing times do not advance");
    return static_cast<double>(times.size() - 2) / span;
}

double average_source_power(const Netlist& nl, const Trace& trace, double t_lo, double t_hi) {
    if (!(t_hi > t_lo)) throw ConfigError("power window is empty");
    std::vector<std::pair<int, int>> nodes;
    for (const auto& sid : trace.source_ids) {
        const auto& cs = std::get<CurrentSource>(nl.element(sid).body);
        nodes.emplace_back(cs.node_from, cs.node_to);
    }
    double integral = 0.0;
    double first_t = 0.0, prev_t = 0.0, prev_p = 0.0;
    bool have_prev = false;
    std::size_t used = 0;
    for (std::size_t i = 0; i < trace.size(); ++i) {
        const double ti = trace.t[i];
        if (ti < t_lo || ti > t_hi) continue;
        double p = 0.0;
        for (std::size_t s = 0; s < nodes.size(); ++s)
            p += trace.u[i](static_cast<Eigen::Index>(s)) *
                 (trace.node_v[i](nodes[s].second) - trace.node_v[i](nodes[s].first));
        if (have_prev) {
            integral += 0.5 * (p + prev_p) * (ti - prev_t);
        } else {
            first_t = ti;
        }
        prev_t = ti;
        prev_p = p;
        have_prev = true;
        ++used;
    }
    if (used < 2 || !(prev_t > first_t))
        throw ConfigError("power window holds fewer than two samples");
    return integral / (prev_t - first_t);
}

double histogram_overlap(const std::vector<double>& a, const std::vector<double>& b, int bins) {
    if (a.empty() || b.empty()) throw ConfigError("histogram overlap needs nonempty samples");
    if (bins < 1) throw ConfigError("histogram overlap needs at least one bin");
    double lo = a[0], hi = a[0];
    for (const auto* v : {&a, &b})
        for (double x : *v) {
            lo = std::min(lo, x);
            hi = std::max(hi, x);
        }
    if (!(hi > lo)) return 1.0;
    std::vector<double> ca(static_cast<std::size_t>(bins), 0.0);
    std::vector<double> cb(static_cast<std::size_t>(bins), 0.0);
    auto fill = [&](const std::vector<double>& xs, std::vector<double>& c) {
        for (double x : xs) {
            auto k = static_cast<std::size_t>((x - lo) / (hi - lo) * bins);
            if (k >= c.size()) k = c.size() - 1;
            c[k] += 1.0 / static_cast<double>(xs.size());
        }
    };
    fill(a, ca);
    fill(b, cb);
    double overlap = 0.0;
    for (int k = 0; k < bins; ++k)
        overlap += std::min(ca[static_cast<std::size_t>(k)], cb[static_cast<std::size_t>(k)]);
    return overlap;
}

double mean_of(const std::vector<double>& xs) {
    if (xs.empty()) throw ConfigError("mean of an empty sample");
    return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

double population_std(const std::vector<double>& xs) {
    const double mu = mean_of(xs);
    double acc = 0.0;
    for (double x : xs) acc += (x - mu) * (x - mu);
    return std::sqrt(acc / static_cast<double>(xs.size()));
}

namespace {

std::vector<double> average_ranks(const std::vector<double>& xs) {
    const std::size_t n = xs.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t i, std::size_t j) { return xs[i] < xs[j]; });
    std::vector<double> rank(n, 0.0);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && xs[order[j + 1]] == xs[order[i]]) ++j;
        const double r = 0.5 * (static_cast<double>(i) + static_cast<double>(j)) + 1.0;
        for (std::size_t k = i; k <= j; ++k) rank[order[k]] = r;
        i = j + 1;
    }
    return rank;
}

} // namespace

double spearman(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size()) throw DimensionError("rank correlation needs equal lengths");
    if (x.size() < 2) throw ConfigError("rank correlation needs at least two points");
    const std::vector<double> rx = average_ranks(x);
    const std::vector<double> ry = average_ranks(y);
    const double mx = mean_of(rx), my = mean_of(ry);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < rx.size(); ++i) {
        sxy += (rx[i] - mx) * (ry[i] - my);
        sxx += (rx[i] - mx) * (rx[i] - mx);
        syy += (ry[i] - my) * (ry[i] - my);
    }
    if (!(sxx > 0.0) || !(syy > 0.0))
        throw ConfigError("rank correlation is undefined for a constant sample");
    return sxy / std::sqrt(sxx * syy);
}

double oscillator_period_analytic(const SnwParams& p, double r_s, double i_b) {
    p.validate();
    if (!(r_s > 0.0)) throw ConfigError("oscillator shunt resistance must be positive");
    if (!(i_b > p.critical_current))
        throw RegimeError("bias below the critical current never fires; no oscillation");
    const double tau_charge = p.inductance / r_s;
    const double tau_discharge = p.inductance / (r_s + p.hotspot_resistance);
    // Current the hotspot phase decays toward; retrapping must stay above it.
    const double floor = i_b * r_s / (r_s + p.hotspot_resistance);
    if (!(floor < p.retrapping_current))
        throw RegimeError("discharge floor at or above the retrapping current; "
                          "the nanowire latches instead of oscillating");
    return tau_discharge *
               std::log((p.critical_current - floor) / (p.retrapping_current - floor)) +
           tau_charge *
               std::log((i_b - p.retrapping_current) / (i_b - p.critical_current));
}

double energy_per_spike(double avg_power, double frequency) {
    if (!(frequency > 0.0))
        throw ConfigError("energy per spike needs a positive spike rate");
    return avg_power / frequency;
}

double reconfigurability_ratio(const std::vector<double>& rates) {
    if (rates.empty()) throw ConfigError("reconfigurability ratio of an empty set");
    const auto [lo, hi] = std::minmax_element(rates.begin(), rates.end());
    if (!(*lo > 0.0)) throw ConfigError("reconfigurability ratio needs positive rates");
    return *hi / *lo;
}

double r_squared_linear(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size()) throw DimensionError("linear fit needs equal lengths");
    if (x.size() < 2) throw ConfigError("linear fit needs at least two points");
    const double mx = mean_of(x), my = mean_of(y);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (!(sxx > 0.0)) throw ConfigError("linear fit is undefined for constant abscissae");
    if (syy == 0.0) return 1.0;
    return (sxy * sxy) / (sxx * syy);
}

} // namespace cryospike
