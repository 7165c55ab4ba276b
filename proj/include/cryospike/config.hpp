#pragma once

#include <string>

#include "cryospike/experiments.hpp"

namespace cryospike {

/// Everything one CLI invocation needs, parsed from a single JSON file.
/// Values in the file carry explicit unit suffixes (_uA, _nH, _mohm, _us,
/// _uV, _ns, _fs, _ohm, _deg); this struct holds strict SI.
struct RunConfig {
    RunConfig() { tol.sample_interval = 1e-9; }

    NeuronConfig neuron;
    SpikingSetup setup;
    double t_end = 20e-6;
    ToleranceSpec tol;

    /// Both memristor resistance pairs were re-derived from this angle.
    bool has_orientation = false;
    double orientation_deg = 0.0;

    bool has_sweep = false;
    SweepSpec sweep;
    bool has_mc = false;
    McSpec mc;
};

/// Parse a config document. Unknown keys and sections are rejected, missing
/// keys keep their defaults, and every number is range-checked by the
/// underlying validate() calls at use time.
[[nodiscard]] RunConfig parse_config(const std::string& text);

/// Read and parse a config file; the file name is quoted in errors.
[[nodiscard]] RunConfig load_config(const std::string& path);

/// Canonical serialization: fixed section order, explicit unit suffixes,
/// two-space indentation. parse(write(parse(text))) is a fixed point.
[[nodiscard]] std::string write_config(const RunConfig& cfg);

/// "HRS" or "LRS".
[[nodiscard]] SmState parse_sm_state(const std::string& name);
[[nodiscard]] std::string sm_state_name(SmState state);

/// "HRS-LRS" style pair label, control state first.
[[nodiscard]] StateCombo parse_combo(const std::string& label);

} // namespace cryospike
