#pragma once

#include <stdexcept>
#include <string>

namespace efimov {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// f(lo) and f(hi) have the same sign
class BracketError : public Error {
 public:
  using Error::Error;
};

// a callback returned NaN or inf
class EvaluationError : public Error {
 public:
  using Error::Error;
};

// iteration limit, step underflow, or a grid that fails its own resolution check
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace efimov
