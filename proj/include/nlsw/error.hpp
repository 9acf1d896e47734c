#pragma once

#include <stdexcept>
#include <string>

namespace nlsw {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid grid, parameter set, or run configuration.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Caller misuse: size mismatches, unknown names.
class UsageError : public Error {
public:
    using Error::Error;
};

/// A field entry became NaN or Inf.
class NonFiniteError : public Error {
public:
    using Error::Error;
};

class SingularSystemError : public Error {
public:
    using Error::Error;
};

/// A discrete invariant failed its structural realness check.
class ConsistencyError : public Error {
public:
    using Error::Error;
};

/// The nonlinear iteration of a time step did not converge.
class StepFailure : public Error {
public:
    StepFailure(const std::string& what, double last_update, long step = -1)
        : Error(what), last_update_(last_update), step_(step) {}

    double last_update() const noexcept { return last_update_; }
    long step() const noexcept { return step_; }

private:
    double last_update_;
    long step_;
};

/// NaN/Inf appeared inside a time step.
class DivergenceError : public StepFailure {
public:
    using StepFailure::StepFailure;
};

/// The tiny-grid oracle could not pin down the identity constants.
class IdentityOracleError : public Error {
public:
    using Error::Error;
};

}  // namespace nlsw
