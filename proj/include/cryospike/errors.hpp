#pragma once

#include <stdexcept>
#include <string>

namespace cryospike {

/// Base class for all cryospike failures.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Bad user input: parameters, config files, malformed requests.
struct ConfigError : Error {
    using Error::Error;
};

/// Netlist cannot be compiled into a well-posed linear system.
struct AssemblyError : Error {
    using Error::Error;
};

/// Operand shapes do not match the compiled system.
struct DimensionError : Error {
    using Error::Error;
};

/// A unique solution does not exist (singular matrix).
struct SingularError : Error {
    using Error::Error;
};

/// Bisection was asked to locate a crossing that is not bracketed.
struct BracketError : Error {
    using Error::Error;
};

/// Non-finite state encountered; carries the simulated time.
struct NumericError : Error {
    double t;
    NumericError(const std::string& msg, double t_) : Error(msg), t(t_) {}
};

/// Event cascade exceeded the cap or chattered below minimum dwell.
struct ZenoError : Error {
    using Error::Error;
};

/// Drive point outside the operating regime (e.g. bias beyond 2*I_c).
struct RegimeError : Error {
    using Error::Error;
};

/// Programming protocol did not reach the requested memristor states.
struct ProgrammingError : Error {
    using Error::Error;
};

/// Too few spikes in the analysis window for the requested statistic.
struct InsufficientSpikesError : Error {
    using Error::Error;
};

/// Monte Carlo sampling could not satisfy parameter invariants.
struct SamplingError : Error {
    using Error::Error;
};

} // namespace cryospike
