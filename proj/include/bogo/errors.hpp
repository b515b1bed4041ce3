#pragma once

#include <stdexcept>
#include <string>

namespace bogo {

// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// A numeric procedure could not reach its tolerance. Carries the best
// value found and the achieved error estimate.
class AccuracyError : public std::runtime_error {
public:
    AccuracyError(const std::string& what, double best_value, double achieved)
        : std::runtime_error(what), value(best_value), error_estimate(achieved) {}
    double value;
    double error_estimate;
};

class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class UnsupportedError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Bad user input (config files, CLI arguments). `field` names the offending key path.
class UsageError : public std::runtime_error {
public:
    UsageError(const std::string& field_path, const std::string& message)
        : std::runtime_error(field_path.empty() ? message : field_path + ": " + message),
          field(field_path) {}
    std::string field;
};

}  // namespace bogo
