#pragma once

#include <stdexcept>

namespace rulelat {

// Base class for everything thrown by this library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed input value or configuration. CLI exit code 2.
class ValidationError : public Error {
public:
    using Error::Error;
};

// Geometry that is parseable but has no adjacency builder, or an operation
// that the geometry cannot support (e.g. spanning on a ring).
class UnsupportedGeometryError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

// Numerical failure. CLI exit code 3.
class NumericError : public Error {
public:
    using Error::Error;
};

// A quantity that diverges at or beyond its domain boundary.
class DivergenceError : public NumericError {
public:
    using NumericError::NumericError;
};

// Iteration budget exhausted before reaching the requested precision.
class ConvergenceError : public NumericError {
public:
    using NumericError::NumericError;
};

// Filesystem failure. CLI exit code 4.
class IoError : public Error {
public:
    using Error::Error;
};

} // namespace rulelat
