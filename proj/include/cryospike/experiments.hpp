#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "cryospike/neuron.hpp"

namespace cryospike {

/// One memristor state pair, control branch first.
struct StateCombo {
    SmState control = SmState::HRS;
    SmState main = SmState::HRS;
};

/// The four programmable combinations in enumeration order.
[[nodiscard]] std::array<StateCombo, 4> state_combos();

/// "HRS-LRS" style label, control state first.
[[nodiscard]] std::string combo_label(const StateCombo& combo);

/// Steady-state spike metrics of one run, measured over the second half of
/// the record so startup transients never enter the statistics.
struct SpikeMetrics {
    double frequency = 0.0;  ///< Hz, reciprocal mean inter-spike interval
    double amplitude = 0.0;  ///< V, mean peak height above baseline
    double peak_level = 0.0; ///< V, mean committed peak value; the two-level statistic
    double avg_power = 0.0;  ///< W, all sources, first to last detected spike
    double energy = 0.0;     ///< J per spike
    int spike_count = 0;
};

/// Run the neuron and reduce the output waveform to SpikeMetrics. Throws
/// InsufficientSpikesError when fewer than three spikes land in the analysis
/// window and ProgrammingError if the run ever disturbed a memristor.
[[nodiscard]] SpikeMetrics measure_spiking(const NeuronConfig& cfg, const SpikingSetup& setup,
                                           double t_end = 20e-6, const ToleranceSpec& tol = {});

/// The reduction step of measure_spiking for an already-completed run.
[[nodiscard]] SpikeMetrics reduce_spiking(const NeuronConfig& cfg, const RunResult& rr,
                                          double t_end);

/// One-parameter sweep: every value is simulated for every requested state
/// combination with all other parameters at their configured values.
struct SweepSpec {
    NeuronConfig base;
    SpikingSetup setup;
    /// One of: bias_current, input_current, critical_current,
    /// retrapping_current, nanowire_inductance, orientation_deg,
    /// coupling_inductance. Device parameters apply to both branches.
    std::string parameter;
    std::vector<double> values;
    std::vector<StateCombo> combos{{SmState::HRS, SmState::HRS},
                                   {SmState::HRS, SmState::LRS},
                                   {SmState::LRS, SmState::HRS},
                                   {SmState::LRS, SmState::LRS}};
    double t_end = 20e-6;
    ToleranceSpec tol;

    void validate() const;
};

struct SweepRow {
    double value = 0.0;
    StateCombo combo;
    bool ok = false;
    std::string error; ///< empty when ok
    SpikeMetrics metrics;
};

/// Overwrite one named parameter on a config/setup pair.
void apply_parameter(NeuronConfig& cfg, SpikingSetup& setup, const std::string& parameter,
                     double value);

/// Rows in (value, combo) input order; failing runs are flagged per row and
/// never abort the remaining grid.
[[nodiscard]] std::vector<SweepRow> run_sweep(const SweepSpec& spec);

/// Bias range that sustains spiking at a given input strength. The upper
/// edge sits one bisection step below the latch limit; empty when even that
/// bias cannot spike.
struct BiasWindow {
    double lower = 0.0;
    double upper = 0.0;
    bool empty = true;
    [[nodiscard]] double width() const { return empty ? 0.0 : upper - lower; }
};

/// Locate the window by bisection at 0.01 uA resolution on the predicate
/// "at least 4 spikes within 10 us"; the lower edge clamps at zero.
[[nodiscard]] BiasWindow find_bias_window(const NeuronConfig& cfg, const StateCombo& combo,
                                          double input_current, const ToleranceSpec& tol = {});

/// Achievable-rate comparison between the programmable pair and a neuron
/// fixed in its high-resistance states, each over its own bias window.
struct ReconfigReport {
    struct ComboRange {
        StateCombo combo;
        BiasWindow window;
        std::vector<double> frequencies; ///< at lower edge, midpoint, upper edge
    };
    std::vector<ComboRange> ranges;
    double programmable_ratio = 0.0;
    double fixed_ratio = 0.0;
    double improvement = 0.0; ///< programmable_ratio / fixed_ratio - 1
};

[[nodiscard]] ReconfigReport reconfigurability_study(const NeuronConfig& cfg,
                                                     double input_current,
                                                     const ToleranceSpec& tol = {});

/// Frequency and power reach of the four combos as the memristor pair is
/// re-derived from each misorientation angle.
struct OrientationPoint {
    double angle_deg = 0.0;
    std::vector<double> frequencies; ///< one per combo, state_combos() order
    std::vector<double> powers;      ///< one per combo
    double max_frequency = 0.0;
    double min_frequency = 0.0;
    double power_range = 0.0; ///< max - min power
};

[[nodiscard]] std::vector<OrientationPoint> orientation_study(const NeuronConfig& cfg,
                                                              const std::vector<double>& angles,
                                                              const SpikingSetup& setup,
                                                              const ToleranceSpec& tol = {});

/// Gaussian parameter-variation study over the combo x bias grid.
struct McSpec {
    NeuronConfig base;
    std::uint64_t seed = 1;
    int samples = 500;
    std::vector<double> bias_points{58.6e-6, 59.1e-6, 59.6e-6};
    double input_current = 6e-6;
    double t_end = 10e-6;

    /// One shared draw per parameter by default, applied to both branches.
    double sigma_critical_current = 0.3e-6;
    double sigma_retrapping_current = 0.2e-6;
    double sigma_nanowire_inductance = 0.1e-9;
    double sigma_r_hrs = 1e-3;
    double sigma_r_lrs = 0.15e-3;

    /// Draw each branch independently instead of sharing one draw.
    bool per_device = false;
    /// Read the sigma fields as 3-sigma spans instead of standard deviations.
    bool values_are_3sigma = false;
    /// Consecutive rejected redraws tolerated before SamplingError.
    int redraw_cap = 1000;

    void validate() const;
};

/// One drawn parameter assignment; values for the control and main branch
/// (identical unless the spec draws per device).
struct McAssignment {
    double critical_current[2] = {0.0, 0.0};
    double retrapping_current[2] = {0.0, 0.0};
    double nanowire_inductance[2] = {0.0, 0.0};
    double r_hrs[2] = {0.0, 0.0};
    double r_lrs[2] = {0.0, 0.0};
};

class RandomStream;

/// Draw one assignment: Gaussian per parameter in documented order, each
/// redrawn until inside mean +- 3 sigma, whole assignments redrawn until
/// I_c > I_r and R_HRS > R_LRS on every branch. Throws SamplingError when
/// the redraw cap is exhausted.
[[nodiscard]] McAssignment sample_parameters(const McSpec& spec, RandomStream& rng);

struct McFailure {
    int trial = -1;
    std::string error;
};

struct SampleStats {
    double mean = 0.0;
    double std_dev = 0.0;
    double min = 0.0;
    double max = 0.0;
    int count = 0;
};

/// Population statistics over the finite entries of a sample vector.
[[nodiscard]] SampleStats summarize(const std::vector<double>& samples);

/// One evaluation point: every trial slot is kept in draw order, failed
/// trials hold NaN and are excluded from the statistics.
struct McCell {
    StateCombo combo;
    double bias_current = 0.0;
    std::vector<double> frequencies;
    std::vector<double> peak_levels;
    SampleStats frequency_stats;
    SampleStats peak_level_stats;
    std::vector<McFailure> failures;
};

struct McOverlap {
    std::string key; ///< "freq|A|B|<bias> uA" or "amp|sm2-HRS|sm2-LRS|<bias> uA"
    double value = 0.0;
};

struct McReport {
    McSpec spec;
    /// Combos sorted by nominal frequency at the first bias point; the cell
    /// grid and the substream point indices follow this order.
    std::vector<StateCombo> combo_order;
    std::vector<McCell> cells; ///< combo-major over combo_order x bias_points
    std::vector<McOverlap> overlaps;
};

/// Seeded, reproducible Monte Carlo: trial i of evaluation point p draws from
/// an independent substream split from (seed, p, i), so the report is a pure
/// function of the spec no matter how many worker threads run (capped by the
/// CRYOSPIKE_THREADS environment variable).
[[nodiscard]] McReport run_monte_carlo(const McSpec& spec);

} // namespace cryospike
