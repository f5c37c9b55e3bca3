#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace eigenlab {

/// Base of every error the library raises.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Caller passed arguments that do not fit together (mixed manifolds, bad flags).
class UsageError : public Error {
 public:
  using Error::Error;
};

/// Mathematically invalid request, e.g. an empty lattice shell.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A grid, family or mesh would exceed the configured node cap.
class ResourceError : public Error {
 public:
  using Error::Error;
};

/// Iterative refinement stopped before meeting its tolerance.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double previous, double last);

  double previous() const noexcept { return previous_; }
  double last() const noexcept { return last_; }

 private:
  double previous_;
  double last_;
};

/// A check was requested without the functionals it is computed from.
class DependencyError : public Error {
 public:
  DependencyError(const std::string& check, std::vector<std::string> missing);

  const std::vector<std::string>& missing() const noexcept { return missing_; }

 private:
  std::vector<std::string> missing_;
};

}  // namespace eigenlab
