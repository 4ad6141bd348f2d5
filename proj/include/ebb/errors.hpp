#pragma once

#include <stdexcept>
#include <string>

namespace ebb {

// Bad user input: config values, malformed files, violated preconditions.
class InputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Argument outside the domain where an operation is defined (e.g. energy
// outside a lead table, or outside the band intersection).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Base for failures of the numerics themselves.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// E is (numerically) a Dirichlet eigenvalue of the isolated sample.
class ResonanceError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

// |t_lr|^2 exceeded 1 beyond rounding, or some other invariant of the
// scattering data broke.
class UnitarityError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class InvariantViolation : public NumericalError {
public:
    using NumericalError::NumericalError;
};

} // namespace ebb
