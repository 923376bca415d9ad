#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace udw {

// Bad numerical input: ε <= 0, L = 0 where a separation is required,
// non-finite integrand values.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// An operation was applied outside the situation it is defined for.
class ContractViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

class ArityError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Closed-form expression evaluated at one of its poles.
class SingularFormula : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

class UndefinedRatio : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(std::vector<std::string> violations);
    const std::vector<std::string>& violations() const { return violations_; }

private:
    std::vector<std::string> violations_;
};

}  // namespace udw
