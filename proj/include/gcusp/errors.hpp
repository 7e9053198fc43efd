#pragma once

#include <stdexcept>
#include <string>

namespace gcusp {

// Bad input: malformed parameters, violated preconditions, schema errors.
struct ValidationError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// A computation ran but its result cannot be trusted (overflow, failed
// cross-check, optimizer non-convergence, ill-conditioned solve).
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace gcusp
