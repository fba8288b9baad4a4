#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace slp {

// Malformed or incomplete configuration input. CLI exit code 2.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Physically invalid parameters (violated invariants). CLI exit code 3.
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Base of all numerical failures. CLI exit code 4.
class NumericalError : public std::runtime_error {
public:
    NumericalError(std::string kind, const std::string& what)
        : std::runtime_error(what), kind_(std::move(kind)) {}
    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

class DegenerateBranch : public NumericalError {
public:
    explicit DegenerateBranch(const std::string& what)
        : NumericalError("DegenerateBranch", what) {}
};

class FitResidualTooLarge : public NumericalError {
public:
    explicit FitResidualTooLarge(const std::string& what)
        : NumericalError("FitResidualTooLarge", what) {}
};

class StabilityViolation : public NumericalError {
public:
    explicit StabilityViolation(const std::string& what)
        : NumericalError("StabilityViolation", what) {}
};

class NonFiniteField : public NumericalError {
public:
    explicit NonFiniteField(const std::string& what)
        : NumericalError("NonFiniteField", what) {}
};

class NoConvergence : public NumericalError {
public:
    explicit NoConvergence(const std::string& what)
        : NumericalError("NoConvergence", what) {}
};

} // namespace slp
