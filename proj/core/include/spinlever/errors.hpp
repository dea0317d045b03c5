#pragma once

#include <stdexcept>
#include <string>

namespace spinlever {

// Bad parameter sets (invariant violations, malformed configuration).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad call arguments (empty grids, mismatched shapes, short traces).
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain of an operation.
class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Stationary state undefined (all relaxation rates zero).
class DegenerateInputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Fixed-step integrator refused the requested step. Carries the largest
// acceptable step so callers can retry.
class StepSizeError : public std::runtime_error {
 public:
  StepSizeError(const std::string& what, double required_dt)
      : std::runtime_error(what), required_dt_(required_dt) {}
  double required_dt() const { return required_dt_; }

 private:
  double required_dt_;
};

class IntegrationDivergedError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Least-squares problem with an all-zero model (nothing to scale).
class UnidentifiableError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace spinlever
