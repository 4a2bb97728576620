#pragma once

#include <stdexcept>
#include <string>

namespace dlab {

// Bad user input: maps to CLI exit code 2.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string field, const std::string& what)
        : std::runtime_error(field.empty() ? what : field + ": " + what), field_(std::move(field)) {}
    explicit ConfigError(const std::string& what) : ConfigError(std::string{}, what) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

// Anything that goes wrong inside an engine: maps to CLI exit code 3.
class EngineError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DomainError : public EngineError {
public:
    using EngineError::EngineError;
};

class ReductionError : public EngineError {
public:
    using EngineError::EngineError;
};

class ConsistencyError : public EngineError {
public:
    using EngineError::EngineError;
};

class ValidationError : public EngineError {
public:
    using EngineError::EngineError;
};

class NumericalError : public EngineError {
public:
    using EngineError::EngineError;
};

class FitError : public EngineError {
public:
    using EngineError::EngineError;
};

class ContourPlacementError : public EngineError {
public:
    using EngineError::EngineError;
};

}  // namespace dlab
