#pragma once

#include <stdexcept>
#include <string>

namespace gtd {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class EvalError : public Error {
 public:
  using Error::Error;
};

// Evaluation reached a variable with no binding.
class UnboundVariableError : public EvalError {
 public:
  explicit UnboundVariableError(std::string name)
      : EvalError("unbound variable '" + name + "'"), name_(std::move(name)) {}
  const std::string& name() const { return name_; }

 private:
  std::string name_;
};

// ln() was evaluated on a non-positive argument. Carries the offending
// subexpression (printed) and the argument value.
class LnDomainError : public EvalError {
 public:
  LnDomainError(std::string subexpression, double value)
      : EvalError("ln of non-positive argument " + std::to_string(value) +
                  " in '" + subexpression + "'"),
        subexpression_(std::move(subexpression)),
        value_(value) {}
  const std::string& subexpression() const { return subexpression_; }
  double value() const { return value_; }

 private:
  std::string subexpression_;
  double value_;
};

// Metric determinant is identically zero; no inverse exists.
class SingularMetricError : public Error {
 public:
  using Error::Error;
};

// A curvature evaluation was requested too close to a singular locus.
// Carries the value of the scalar-curvature denominator at the point.
class SingularProximityError : public Error {
 public:
  SingularProximityError(std::string what, double denominator_value)
      : Error(std::move(what)), denominator_value_(denominator_value) {}
  double denominator_value() const { return denominator_value_; }

 private:
  double denominator_value_;
};

// An induced or Hessian metric degenerated to zero / identically singular.
class DegenerateMetricError : public Error {
 public:
  using Error::Error;
};

}  // namespace gtd
