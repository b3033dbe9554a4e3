#pragma once

#include <stdexcept>
#include <string>

namespace ltccp {

/// Base class for every error raised by the library. The CLI maps each
/// concrete subclass to its own exit code.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Tensor or sequence dimensions do not compose.
class StructuralError : public Error {
public:
    using Error::Error;
};

/// Two sets of predictions, or predictions and ground truth, cover
/// different papers.
class IdMismatchError : public StructuralError {
public:
    using StructuralError::StructuralError;
};

/// Caller violated a precondition (empty input, bad range, ...).
class UsageError : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

/// Malformed input record or file.
class SchemaError : public Error {
public:
    using Error::Error;
};

class MissingInputError : public Error {
public:
    using Error::Error;
};

class IngestError : public Error {
public:
    using Error::Error;
};

/// Non-finite loss or gradient during optimization.
class TrainingError : public Error {
public:
    using Error::Error;
};

/// Metric undefined for the given pairs (zero ground truth).
class MetricError : public Error {
public:
    using Error::Error;
};

}  // namespace ltccp
