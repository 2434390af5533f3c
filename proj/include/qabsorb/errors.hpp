#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace qabsorb {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Bad argument value (wrong index, descending samples, empty input).
class ArgumentError : public Error {
public:
    using Error::Error;
};

/// Request outside the representable domain (e.g. a finite grid on a half-line).
class DomainError : public Error {
public:
    using Error::Error;
};

/// A documented precondition on a field does not hold.
class ContractViolation : public Error {
public:
    using Error::Error;
};

/// Stepper asked to run in a configuration it cannot handle.
class ConfigurationError : public Error {
public:
    using Error::Error;
};

class NumericError : public Error {
public:
    using Error::Error;
};

class ConvergenceError : public Error {
public:
    using Error::Error;
};

/// Invalid scenario configuration; carries every violated field.
class ConfigError : public Error {
public:
    explicit ConfigError(std::vector<std::string> issues)
        : Error(join(issues)), issues_(std::move(issues)) {}

    const std::vector<std::string>& issues() const noexcept { return issues_; }

private:
    static std::string join(const std::vector<std::string>& issues) {
        std::string out = "invalid configuration:";
        for (const auto& s : issues) {
            out += "\n  - ";
            out += s;
        }
        return out;
    }

    std::vector<std::string> issues_;
};

}  // namespace qabsorb
