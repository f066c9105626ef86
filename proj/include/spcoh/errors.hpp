#pragma once

#include <stdexcept>
#include <string>

namespace spcoh {

// Invalid physical or numerical input.
class domain_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A grid is too coarse to represent the requested structure.
class resolution_error : public domain_error {
 public:
  using domain_error::domain_error;
};

// Numerical failure during a computation (instability, aliasing, ...).
class numeric_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Spectral content too close to the Nyquist edge of a sampled field.
class aliasing_error : public numeric_error {
 public:
  using numeric_error::numeric_error;
};

// A time-domain run did not settle; carries the measured residual.
class convergence_error : public numeric_error {
 public:
  convergence_error(const std::string& what, double residual)
      : numeric_error(what), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

}  // namespace spcoh
