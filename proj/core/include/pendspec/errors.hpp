#pragma once

#include <stdexcept>
#include <string>

namespace pendspec {

class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Bad user input: unknown catalog id, parameter out of range, malformed config.
class ConfigError : public Error {
  using Error::Error;
};

// Sampled force function with a grid that is too coarse or not strictly increasing.
class GridError : public Error {
  using Error::Error;
};

// Requested boundary fixed points for a driving strength that has none.
class NoFixedPointsError : public Error {
  using Error::Error;
};

// Step size underflow or similar blow-up; carries the last x reached.
class IntegrationError : public Error {
 public:
  IntegrationError(const std::string& what, double last_x)
      : Error(what + " (last good x = " + std::to_string(last_x) + ")"), last_x_(last_x) {}
  double last_x() const noexcept { return last_x_; }

 private:
  double last_x_;
};

// Operation requires a boundary class the force function does not have.
class ClassificationError : public Error {
  using Error::Error;
};

// Critical-curve construction hit a non-removable singularity; carries the angle.
class ConstructionError : public Error {
 public:
  ConstructionError(const std::string& what, double alpha)
      : Error(what + " (alpha = " + std::to_string(alpha) + ")"), alpha_(alpha) {}
  double offending_alpha() const noexcept { return alpha_; }

 private:
  double alpha_;
};

// Cross-check failed, e.g. node count disagrees with the eigenvalue index.
class ConsistencyError : public Error {
  using Error::Error;
};

}  // namespace pendspec
