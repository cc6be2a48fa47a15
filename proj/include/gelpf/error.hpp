#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace gelpf {

/// Raised for parameters outside the distribution's domain (alpha <= 0, zeta = 1, ...).
class ParameterError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

/// Raised for unusable input data: too few values, non-finite values, ties.
class DataError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a quadrature cannot meet its tolerance.
class IntegrationError : public std::runtime_error {
public:
  IntegrationError(const std::string& what, double achieved)
      : std::runtime_error(what + " (achieved relative error " + std::to_string(achieved) + ")"),
        achieved_(achieved) {}

  double achieved_error() const noexcept { return achieved_; }

private:
  double achieved_;
};

/// Raised when an optimizer stops without satisfying its convergence test.
/// Carries a human readable trace of what was attempted.
class ConvergenceError : public std::runtime_error {
public:
  ConvergenceError(const std::string& what, std::vector<std::string> trace)
      : std::runtime_error(what), trace_(std::move(trace)) {}

  const std::vector<std::string>& trace() const noexcept { return trace_; }

private:
  std::vector<std::string> trace_;
};

/// Raised when too many bootstrap replicates are rejected for the intervals to mean anything.
class DegenerateBootstrapError : public std::runtime_error {
public:
  DegenerateBootstrapError(const std::string& what, double rejection_proportion)
      : std::runtime_error(what), proportion_(rejection_proportion) {}

  double rejection_proportion() const noexcept { return proportion_; }

private:
  double proportion_;
};

}  // namespace gelpf
