#ifndef ORDRANK_ERRORS_HPP
#define ORDRANK_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace ordrank {

/// Argument outside the mathematical domain of an operation (k = 0, K < 2, non-finite x, ...).
class DomainError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

/// Pattern weights/psi values that cannot define a distribution.
class InvalidPattern : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Observed comparison data violating the model's support (zero outcomes, |y| > K).
class CorruptData : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent experiment / CLI configuration.
class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// I/O and parse failures on input files.
class DataError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// An iterative routine failed to meet its tolerance.
class ConvergenceError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

}  // namespace ordrank

#endif  // ORDRANK_ERRORS_HPP
