#pragma once

#include <stdexcept>
#include <string>

namespace virasq {

// Invalid FockConfig or mismatched operator structure.
struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Operator dimensions or mode structures do not match.
struct StructureError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// A fractional power / log / scalar function is undefined on part of the
// spectrum.  Carries the offending eigenvalue.
struct DomainError : std::runtime_error {
    double eigenvalue;
    explicit DomainError(const std::string& what, double lambda)
        : std::runtime_error(what), eigenvalue(lambda) {}
};

// Closed-form flow hit the pole 1 - n*theta*z^n = 0.
struct SingularFlowError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace virasq
