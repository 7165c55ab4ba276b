#include "doctest.h"

#include <cmath>
#include <vector>

#include "cryospike/analysis.hpp"
#include "cryospike/oscillator.hpp"

using namespace cryospike;

TEST_CASE("the baseline is the sample median") {
    CHECK(waveform_baseline({3.0, 1.0, 2.0}) == 2.0);
    CHECK(waveform_baseline({4.0, 1.0, 2.0, 3.0}) == 2.5);
}

TEST_CASE("peaks arm at half swing and commit on the quarter-level return") {
    const std::vector<double> t{0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
    const std::vector<double> v{0, 0, 1, 0, 0, 0, 2, 0, 0, 0};
    const std::vector<Spike> spikes = detect_spikes(t, v);
    REQUIRE(spikes.size() == 2);
    CHECK(spikes[0].t == 2.0);
    CHECK(spikes[0].v == 1.0);
    CHECK(spikes[1].t == 6.0);
    CHECK(spikes[1].v == 2.0);
}

TEST_CASE("an interval still armed at the end of the record is dropped") {
    const std::vector<double> t{0, 1, 2, 3, 4, 5};
    const std::vector<double> v{0, 0, 2, 0, 0, 1.5};
    CHECK(detect_spikes(t, v).size() == 1);
}

TEST_CASE("flat records yield no spikes") {
    const std::vector<double> t{0, 1, 2, 3};
    CHECK(detect_spikes(t, {1.0, 1.0, 1.0, 1.0}).empty());
    CHECK(detect_spikes(t, {0.0, 0.9e-9, 0.0, 0.9e-9}).empty());
}

TEST_CASE("spike frequency drops the first interval's spike and needs three") {
    std::vector<Spike> spikes;
    for (const double t : {1e-6, 2e-6, 3e-6, 4e-6}) spikes.push_back({t, 1.0});
    CHECK(spike_frequency(spikes) == doctest::Approx(1e6).epsilon(1e-12));
    spikes.resize(2);
    CHECK_THROWS_AS(spike_frequency(spikes), InsufficientSpikesError);
}

TEST_CASE("spike amplitude averages every peak above the baseline") {
    const std::vector<Spike> spikes{{1.0, 1.0e-6}, {2.0, 1.2e-6}};
    CHECK(spike_amplitude(spikes, 0.0) == doctest::Approx(1.1e-6).epsilon(1e-12));
    CHECK(spike_amplitude(spikes, 0.1e-6) == doctest::Approx(1.0e-6).epsilon(1e-12));
}

TEST_CASE("the analytic oscillator period reproduces the reference shunts") {
    OscillatorConfig cfg;
    cfg.shunt_resistance = 98e-3;
    CHECK(oscillator_period(cfg) == doctest::Approx(70.73e-9).epsilon(1e-3));
    CHECK(1.0 / oscillator_period(cfg) == doctest::Approx(14.14e6).epsilon(1e-3));
    cfg.shunt_resistance = 14.4e-3;
    CHECK(oscillator_period(cfg) == doctest::Approx(481.5e-9).epsilon(1e-3));
    CHECK(1.0 / oscillator_period(cfg) == doctest::Approx(2.077e6).epsilon(1e-3));
}

TEST_CASE("a bias that cannot sustain oscillation is a regime error") {
    OscillatorConfig cfg;
    cfg.bias_current = cfg.nanowire.critical_current;
    CHECK_THROWS_AS(oscillator_period(cfg), RegimeError);
    cfg.bias_current = 40e-6;
    cfg.shunt_resistance = 5e3; ///< discharge floor lands on the retrapping current
    CHECK_THROWS_AS(oscillator_period(cfg), RegimeError);
}

TEST_CASE("the simulated firing rate matches the analytic period") {
    const OscillatorConfig cfg;
    const RunResult rr = run_oscillator(cfg, 2e-6);
    CHECK(firing_rate(rr.trace, "snw") ==
          doctest::Approx(1.0 / oscillator_period(cfg)).epsilon(1e-6));
}

TEST_CASE("energy per spike divides power by rate") {
    CHECK(energy_per_spike(4e-11, 2e6) == doctest::Approx(2e-17).epsilon(1e-12));
}

TEST_CASE("reconfigurability ratio spans max over min") {
    CHECK(reconfigurability_ratio({2.0, 1.0, 4.0}) == doctest::Approx(4.0).epsilon(1e-12));
    CHECK_THROWS_AS(reconfigurability_ratio({}), ConfigError);
    CHECK_THROWS_AS(reconfigurability_ratio({1.0, 0.0}), ConfigError);
}

TEST_CASE("r squared is one on a line and 12/13 on the worked parabola") {
    const std::vector<double> x{0.0, 1.0, 2.0, 3.0};
    const std::vector<double> y{1.0, 3.0, 5.0, 7.0};
    CHECK(r_squared_linear(x, y) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r_squared_linear({0.0, 1.0, 2.0}, {0.0, 1.0, 4.0}) ==
          doctest::Approx(12.0 / 13.0).epsilon(1e-12));
}

TEST_CASE("histogram overlap covers the worked half-overlap example") {
    const std::vector<double> a{0.0, 0.0, 0.0, 1.0};
    const std::vector<double> b{0.0, 1.0, 1.0, 1.0};
    CHECK(histogram_overlap(a, b, 2) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(histogram_overlap(a, a, 2) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(histogram_overlap({0.0, 1.0}, {10.0, 11.0}, 4) == 0.0);
    CHECK(histogram_overlap({5.0, 5.0}, {5.0, 5.0}, 4) == 1.0);
}

TEST_CASE("mean and population standard deviation match the hand values") {
    const std::vector<double> xs{1.0, 2.0, 3.0};
    CHECK(mean_of(xs) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(population_std(xs) == doctest::Approx(std::sqrt(2.0 / 3.0)).epsilon(1e-12));
}

TEST_CASE("spearman is exactly signed one on monotone data and averages ties") {
    const std::vector<double> x{1.0, 2.0, 3.0, 4.0};
    CHECK(spearman(x, {10.0, 20.0, 25.0, 70.0}) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(spearman(x, {8.0, 4.0, 2.0, 1.0}) == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(spearman({1.0, 2.0, 2.0, 3.0}, {1.0, 2.0, 3.0, 4.0}) ==
          doctest::Approx(3.0 / std::sqrt(10.0)).epsilon(1e-9));
}
