#pragma once

#include <stdexcept>
#include <string>

namespace esnrae {

/// Base class for every error raised by the library. The CLI maps the
/// concrete subclasses onto its exit-code contract.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid argument values (density outside (0,1], inverted ranges, ...).
class ParameterError : public Error {
public:
    using Error::Error;
};

/// Dimension mismatch between operands.
class ShapeError : public Error {
public:
    using Error::Error;
};

/// Malformed input file or document.
class FormatError : public Error {
public:
    using Error::Error;
};

/// Numerical failure: SVD non-convergence, degenerate matrices, all-zero
/// state collections.
class NumericalError : public Error {
public:
    using Error::Error;
};

/// A reservoir with zero spectral radius cannot be rescaled.
class DegenerateMatrixError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace esnrae
