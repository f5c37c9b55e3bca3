#include "eigenlab/errors.hpp"

#include <cstdio>

namespace eigenlab {

namespace {

std::string describe_convergence(const std::string& what, double previous, double last) {
  char buf[160];
  std::snprintf(buf, sizeof buf, " (last two values %.17g, %.17g)", previous, last);
  return what + buf;
}

std::string describe_dependency(const std::string& check, const std::vector<std::string>& missing) {
  std::string msg = "check '" + check + "' needs functionals not in the config:";
  for (const auto& m : missing) msg += " " + m;
  return msg;
}

}  // namespace

ConvergenceError::ConvergenceError(const std::string& what, double previous, double last)
    : Error(describe_convergence(what, previous, last)), previous_(previous), last_(last) {}

DependencyError::DependencyError(const std::string& check, std::vector<std::string> missing)
    : Error(describe_dependency(check, missing)), missing_(std::move(missing)) {}

}  // namespace eigenlab
