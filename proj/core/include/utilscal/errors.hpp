#pragma once

#include <stdexcept>
#include <string>

namespace utilscal {

// Base of every error raised by the library. Callers that only care about
// "something went wrong" catch this; the CLI maps it to exit code 1.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed input: dimension mismatches, invalid parameters, infeasible
// reference points, unparsable files.
class InputError : public Error {
public:
    using Error::Error;
};

// Argument outside the mathematical domain of an operation (e.g. gradient of
// h requested at a non-Slater point).
class DomainError : public Error {
public:
    using Error::Error;
};

// The operation is not defined for this utility family (Leontief gradients).
class UnsupportedOperation : public Error {
public:
    using Error::Error;
};

// A configuration that violates a solver precondition, e.g. a non-barrier
// utility handed to the barrier ascent method.
class ConfigurationError : public Error {
public:
    using Error::Error;
};

// Starting point with h(x0) not above the barrier level.
class InvalidStart : public Error {
public:
    using Error::Error;
};

// Backtracking exhausted its budget without an acceptable step.
class LineSearchFailure : public Error {
public:
    using Error::Error;
};

// Weight recovery could not certify the requested point.
class RecoveryFailed : public Error {
public:
    using Error::Error;
};

}  // namespace utilscal
