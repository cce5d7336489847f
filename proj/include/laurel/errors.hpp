#pragma once

#include <stdexcept>
#include <string>

namespace laurel {

// Caller handed us a site outside the domain under discussion.
struct DomainError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// A coefficient evaluated to zero (equations require units).
struct ZeroCoefficient : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// A Table coefficient was asked for a value off its window.
struct OutsideTableWindow : std::out_of_range {
    using std::out_of_range::out_of_range;
};

// An operation specific to one equation shape got another.
struct ShapeMismatch : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// A multiplicative integration met an inconsistent cycle.
struct CompatibilityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// The coefficient condition fails where it was required to hold.
struct ConditionViolated : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A reduction map failed validation.
struct InvalidReduction : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// A certificate that theory says must hold failed its re-check: a bug.
struct CertificateError : std::logic_error {
    using std::logic_error::logic_error;
};

// An internal invariant backed by a proof was observed broken.
struct InvariantViolation : std::logic_error {
    using std::logic_error::logic_error;
};

}  // namespace laurel
