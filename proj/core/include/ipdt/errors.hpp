#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ipdt {

// Invalid input: a constructor invariant or operation precondition was violated.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Base for failures that come out of the numerics rather than the inputs.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The derivative-time formula sits on a tangent pole.
class DegenerateSpecError : public NumericError {
 public:
  DegenerateSpecError(const std::string& what, double argument)
      : NumericError(what), argument_(argument) {}

  double argument() const noexcept { return argument_; }

 private:
  double argument_;
};

// A simulated signal went non-finite.
class DivergenceError : public NumericError {
 public:
  DivergenceError(const std::string& what, std::size_t step)
      : NumericError(what), step_(step) {}

  std::size_t step() const noexcept { return step_; }

 private:
  std::size_t step_;
};

// File could not be read or written; the message names the path.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ipdt
