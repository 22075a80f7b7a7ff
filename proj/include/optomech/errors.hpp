#pragma once

#include <stdexcept>
#include <string>

namespace optomech {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Parameters outside the regime the model treats (e.g. 1 + 4 d2 <= 0).
struct UnsupportedRegimeError : Error {
    using Error::Error;
};

// Argument outside the domain of a function (time off grid, nu < 1, ...).
struct DomainError : Error {
    using Error::Error;
};

// Inputs that should describe the same instant or state but do not.
struct ConsistencyError : Error {
    using Error::Error;
};

// Structural check on a matrix or block failed.
struct ValidationError : Error {
    using Error::Error;
};

// Fock-space run flagged by one of the oracle monitors.
struct FlaggedRunError : Error {
    enum class Reason { norm_drift, cutoff_insufficient, step_convergence };

    FlaggedRunError(Reason r, const std::string& what) : Error(what), reason(r) {}
    Reason reason;
};

struct ConfigError : Error {
    using Error::Error;
};

}  // namespace optomech
