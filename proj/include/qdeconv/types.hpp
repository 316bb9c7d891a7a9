#pragma once

#include <Eigen/Dense>
#include <complex>

namespace qdeconv {

// Dense phase-space containers, templated on the scalar so real and
// complexified quantities share one vocabulary.
template <typename Scalar>
using PhaseMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using PhaseVector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using Complex = std::complex<double>;
using RealMatrix = PhaseMatrix<double>;
using ComplexMatrix = PhaseMatrix<Complex>;
using RealVector = PhaseVector<double>;
using ComplexVector = PhaseVector<Complex>;

// slack allowed below zero in the positivity checks
inline constexpr double kPositivitySlack = 1e-10;

// modes whose symplectic eigenvalue is within this distance of the
// pure-state floor 1/2 are rejected by the imaginary-time machinery
inline constexpr double kEpsilonPurity = 1e-9;

// cosh/sinh arguments beyond this overflow a double
inline constexpr double kMaxHyperbolicArg = 350.0;

// Metric weighting the observable space when a noise channel is transposed.
// SquareRoot and Bures give genuinely different kernels; ClassicalFisher is
// the commutative limit and shares the Bures formula.
enum class Metric { SquareRoot, Bures, ClassicalFisher };

inline const char* to_string(Metric m) {
  switch (m) {
    case Metric::SquareRoot:
      return "sqrt";
    case Metric::Bures:
      return "bures";
    case Metric::ClassicalFisher:
      return "classical";
  }
  return "unknown";
}

}  // namespace qdeconv
