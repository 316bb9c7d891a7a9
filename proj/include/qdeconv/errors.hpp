#pragma once

#include <stdexcept>
#include <string>

namespace qdeconv {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// shape or parity problems with inputs (odd dimension, mismatched sizes)
struct DimensionError : Error {
  using Error::Error;
};

// covariance fails symmetry / positive-definiteness requirements
struct InvalidStateError : Error {
  using Error::Error;
};

// eigensolver breakdown, residuals out of tolerance, lost realness
struct NumericalError : Error {
  using Error::Error;
};

// a symplectic eigenvalue sits at or below the purity floor 1/2 + eps,
// where the imaginary-time machinery diverges
struct PuritySingularityError : Error {
  using Error::Error;
};

// a hyperbolic argument would overflow double precision
struct OverflowError : Error {
  using Error::Error;
};

// an inverse was requested of a singular matrix
struct SingularMatrixError : Error {
  using Error::Error;
};

// operation defined for a different metric than the kernel carries
struct MetricMismatchError : Error {
  using Error::Error;
};

// out-of-domain scalar parameter (negative ridge weight, bad cutoff, ...)
struct ParameterError : Error {
  using Error::Error;
};

// config or data-file text could not be parsed; message carries the line number
struct ConfigError : Error {
  using Error::Error;
};

}  // namespace qdeconv
