#pragma once

#include <stdexcept>
#include <string>

namespace wrcast {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Instance for which the requested quantity is undefined (e.g. equal estimates).
class DegenerateError : public DomainError {
public:
    using DomainError::DomainError;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

/// Input data could not be parsed or violates a data invariant.
class DataError : public Error {
public:
    using Error::Error;
};

class SchemaError : public DataError {
public:
    using DataError::DataError;
};

class IntegrityError : public DataError {
public:
    using DataError::DataError;
};

class IdentifiabilityError : public DataError {
public:
    using DataError::DataError;
};

class TrainingError : public Error {
public:
    using Error::Error;
};

/// Optimizer ran out of iterations; carries the loss it stopped at.
class ConvergenceError : public TrainingError {
public:
    ConvergenceError(const std::string& what, double last_loss)
        : TrainingError(what), last_loss_(last_loss) {}
    double last_loss() const noexcept { return last_loss_; }

private:
    double last_loss_;
};

/// Operation called in the wrong object state (e.g. backward before forward).
class StateError : public Error {
public:
    using Error::Error;
};

}  // namespace wrcast
