#pragma once

#include <stdexcept>
#include <string>

namespace beamq {

// Quadrature or eigensolver accuracy fell below the requested threshold.
class NumericalError : public std::runtime_error {
 public:
  NumericalError(const std::string& what, double residual)
      : std::runtime_error(what + " (residual " + std::to_string(residual) + ")"),
        residual_(residual) {}

  double residual() const { return residual_; }

 private:
  double residual_;
};

// Requested exact computation exceeds the configured size limits.
class CapacityError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace beamq
