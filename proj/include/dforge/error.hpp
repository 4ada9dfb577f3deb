#pragma once

#include <stdexcept>
#include <string>

namespace dforge {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad user input: out-of-range parameters, malformed set/point descriptors.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// A quadrature or table construction did not reach its tolerance.
class NumericalError : public Error {
 public:
  using Error::Error;
};

// A mathematical invariant failed beyond its numerical budget.
class InvariantViolation : public Error {
 public:
  InvariantViolation(std::string check, double observed, double budget)
      : Error(check + ": observed " + std::to_string(observed) + " exceeds budget " +
              std::to_string(budget)),
        check_(std::move(check)),
        observed_(observed),
        budget_(budget) {}

  const std::string& check() const { return check_; }
  double observed() const { return observed_; }
  double budget() const { return budget_; }

 private:
  std::string check_;
  double observed_;
  double budget_;
};

}  // namespace dforge
