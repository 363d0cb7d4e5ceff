#pragma once

#include <stdexcept>
#include <string>

namespace ladder {

/// Invalid model parameters or malformed requests (bad level index, even
/// quantum transfer, window underflow, ...).
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Two adiabatic levels closer than the degeneracy guard at coordinate y.
class NearDegeneracy : public std::runtime_error {
 public:
  NearDegeneracy(double y, double gap);

  double y() const noexcept { return y_; }
  double gap() const noexcept { return gap_; }

 private:
  double y_;
  double gap_;
};

/// A quadrature, refinement or bracketing loop failed to meet its tolerance.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A numerical invariant that should hold by construction was violated.
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace ladder
