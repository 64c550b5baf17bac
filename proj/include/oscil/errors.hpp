#pragma once

#include <stdexcept>
#include <string>

namespace oscil {

/// A value lies outside the set on which an operation is defined
/// (t outside [0,T], a window outside the function's domain, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Malformed or inconsistent arguments (unsorted grids, a > b, ...).
class ArgumentError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A documented precondition on the mathematical input does not hold
/// (point outside the strip, non-convex A, norm bound violated).
class PreconditionError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// An iterative construction failed to produce a certificate within budget.
class ConstructionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace oscil
