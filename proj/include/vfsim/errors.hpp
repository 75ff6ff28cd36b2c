#pragma once

#include <stdexcept>
#include <string>

namespace vfsim {

/// Base of every exception the simulator raises. `kind()` is a stable
/// machine-readable tag used by the CLI when it emits error records.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& message) : std::runtime_error(message) {}
    virtual const char* kind() const noexcept { return "error"; }
};

/// A physical or numeric argument is outside its documented domain.
class DomainError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "domain"; }
};

/// A name (material preset, metric column) matched nothing; the message
/// lists the valid choices.
class LookupError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "lookup"; }
};

/// Root bracketing or convergence failure in the operating-point solver.
class SolverError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "solver"; }
};

/// A config document violates the schema: unknown key, wrong type, or a
/// value that fails validation.
class ConfigError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "config"; }
};

/// Malformed input to an analysis routine (short sample window, empty
/// element set, non-finite value).
class InputError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "input"; }
};

/// The reference fundamental is too small to normalize against.
class DegenerateReferenceError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "degenerate-reference"; }
};

} // namespace vfsim
