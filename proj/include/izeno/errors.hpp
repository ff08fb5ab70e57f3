#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace izeno {

// Invalid argument values (negative energies, malformed specs).
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A formula was asked for outside the regime where it holds.
class PreconditionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Base for failures of a numerical method on valid input.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ConvergenceError : public NumericalError {
public:
    ConvergenceError(const std::string& what, std::vector<std::complex<double>> trail)
        : NumericalError(what), trail_(std::move(trail)) {}
    const std::vector<std::complex<double>>& trail() const noexcept { return trail_; }

private:
    std::vector<std::complex<double>> trail_;
};

class SheetError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class RefinementError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class StiffnessError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class FitQualityError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class ConditioningError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

// Config parse or validation failure; key_path is "section.key".
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string key_path, const std::string& message)
        : std::runtime_error(key_path.empty() ? message : key_path + ": " + message),
          key_path_(std::move(key_path)) {}
    const std::string& key_path() const noexcept { return key_path_; }

private:
    std::string key_path_;
};

}  // namespace izeno
