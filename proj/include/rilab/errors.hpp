#pragma once

#include <stdexcept>
#include <string>

namespace rilab {

// Argument outside the domain of a function (t <= 0, theta out of range, ...).
struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

// A norm or tail integral that does not converge.
struct DivergenceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed input: bad JSON, bad CSV, unsupported combination.
struct InputError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// A space descriptor or theorem case whose hypotheses fail.
struct InadmissibleError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace rilab
