#pragma once

#include <string>
#include <vector>

#include "cryospike/devices.hpp"
#include "cryospike/netlist.hpp"
#include "cryospike/solver.hpp"

namespace cryospike {

struct Spike {
    double t = 0.0;
    double v = 0.0;
};

/// Median of the sampled waveform.
[[nodiscard]] double waveform_baseline(const std::vector<double>& v);

/// Two-threshold peak detector. A spike arms when the waveform reaches
/// halfway from baseline to the global maximum and commits at the local
/// maximum once the waveform falls back through the quarter level; an
/// interval still armed at the end of the record is dropped. Records whose
/// swing stays under 1 nV yield no spikes.
[[nodiscard]] std::vector<Spike> detect_spikes(const std::vector<double>& t,
                                               const std::vector<double>& v);

/// Reciprocal mean inter-spike interval with the first spike discarded.
/// Throws InsufficientSpikesError below three spikes.
[[nodiscard]] double spike_frequency(const std::vector<Spike>& spikes);

/// Mean peak height above baseline over every detected spike.
[[nodiscard]] double spike_amplitude(const std::vector<Spike>& spikes, double baseline);

/// Rate of a device's transitions into its resistive state, first firing
/// discarded like spike_frequency. Throws InsufficientSpikesError below
/// three firings.
[[nodiscard]] double firing_rate(const Trace& trace, const std::string& device);

/// Mean power delivered by all sources over [t_lo, t_hi], by trapezoidal
/// integration of sum_s u_s * (v_to - v_from) across the trace samples.
[[nodiscard]] double average_source_power(const Netlist& nl, const Trace& trace,
                                          double t_lo, double t_hi);

/// Closed-form period of a single nanowire relaxation oscillator loaded by a
/// fixed shunt r_s: superconducting recharge with tau = L/r_s from the
/// retrapping current up to the critical current, then hotspot discharge with
/// tau = L/(r_s + R_hs) back down. Throws RegimeError unless the bias exceeds
/// the critical current and the discharge floor sits below retrapping.
[[nodiscard]] double oscillator_period_analytic(const SnwParams& p, double r_s, double i_b);

/// Average source power over the spiking window divided by the spike rate.
[[nodiscard]] double energy_per_spike(double avg_power, double frequency);

/// Max over min of a set of positive rates.
[[nodiscard]] double reconfigurability_ratio(const std::vector<double>& rates);

/// Coefficient of determination of the least-squares line through (x, y).
[[nodiscard]] double r_squared_linear(const std::vector<double>& x,
                                      const std::vector<double>& y);

/// Sum over shared bins of min(p_a, p_b) with both samples binned on their
/// pooled min-max range; 1 when the pooled range is degenerate.
[[nodiscard]] double histogram_overlap(const std::vector<double>& a,
                                       const std::vector<double>& b, int bins = 50);

[[nodiscard]] double mean_of(const std::vector<double>& xs);

/// Standard deviation normalized by N.
[[nodiscard]] double population_std(const std::vector<double>& xs);

/// Rank correlation with average ranks over ties.
[[nodiscard]] double spearman(const std::vector<double>& x, const std::vector<double>& y);

} // namespace cryospike
