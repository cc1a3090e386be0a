#pragma once

#include <stdexcept>
#include <string>

namespace wtcce {

// Argument outside the domain of a rate expression (negative SNR, NaN, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A closed-form expression is evaluated at a point where it is not defined
// (zero eavesdropper power, |rho_12| = 1, negative literal SNR term).
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Singular / non-PSD matrices, exceeded grid budgets and similar failures.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace wtcce
