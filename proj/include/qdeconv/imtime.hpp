#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <string>
#include <utility>

#include "qdeconv/errors.hpp"
#include "qdeconv/symplectic.hpp"
#include "qdeconv/types.hpp"

namespace qdeconv {

// Effective beta*omega of a thermal mode with symplectic eigenvalue nu:
// inverting nu = (1/2) coth(beta omega / 2) gives
//   beta omega = log((2 nu + 1) / (2 nu - 1)).
// log1p keeps full precision deep in the classical regime nu >> 1/2.
inline double nu_to_beta_omega(double nu, double epsilon_purity = kEpsilonPurity) {
  if (!(nu > 0.5 + epsilon_purity))
    throw PuritySingularityError("nu_to_beta_omega: symplectic eigenvalue " + std::to_string(nu) +
                                 " is within " + std::to_string(epsilon_purity) +
                                 " of the pure-state floor 1/2");
  return std::log1p(2.0 / (2.0 * nu - 1.0));
}

// Imaginary-time flow of one thermal mode, rho^s phi rho^{-s} acting on
// phase-space labels:
//   R_s = [[cosh(bw s), -i omega sinh(bw s)],
//          [ i sinh(bw s)/omega, cosh(bw s)]],   bw = beta * omega.
// Entries grow like e^{bw |s|}; arguments past kMaxHyperbolicArg are refused.
inline Eigen::Matrix2cd single_mode_propagator(double beta_omega, double omega, double s) {
  if (!(beta_omega > 0.0) || !(omega > 0.0))
    throw ParameterError("single_mode_propagator: beta*omega and omega must be positive");
  const double arg = beta_omega * s;
  if (std::abs(arg) > kMaxHyperbolicArg)
    throw OverflowError("single_mode_propagator: hyperbolic argument " + std::to_string(arg) +
                        " exceeds " + std::to_string(kMaxHyperbolicArg));
  const double c = std::cosh(arg);
  const double sh = std::sinh(arg);
  Eigen::Matrix2cd r;
  r << Complex(c, 0.0), Complex(0.0, -omega * sh), Complex(0.0, sh / omega), Complex(c, 0.0);
  return r;
}

struct ImaginaryTimePropagator {
  RealMatrix source_cov;  // covariance the flow belongs to
  double s = 0.0;
  ComplexMatrix matrix;
};

// Imaginary-time flow of a general Gaussian state with covariance M.  The
// modes are decoupled by a Williamson congruence M = S^T D S; in normal
// coordinates each mode is thermal with frequency 1 and
// beta*omega = log((2 nu_k + 1)/(2 nu_k - 1)), and the flow conjugates back:
//   R_s^M = S^{-1} blkdiag(r_k(s)) S.
// Sanity of the result is the caller's concern only through the invariants
// it is tested against: R_0 = 1, R_s R_{-s} = 1, conj(R_s) = R_{-s} and
// R_s^T (M + (i/2) Delta) R_s = M + (i/2) Delta.
inline ImaginaryTimePropagator propagator(const RealMatrix& cov, const RealMatrix& delta, double s,
                                          double epsilon_purity = kEpsilonPurity) {
  const WilliamsonDecomposition wd = williamson(cov, delta);
  const Eigen::Index dim = cov.rows();

  if (s == 0.0) return {cov, 0.0, ComplexMatrix::Identity(dim, dim)};

  ComplexMatrix core = ComplexMatrix::Zero(dim, dim);
  for (Eigen::Index mode = 0; mode < wd.nu.size(); ++mode) {
    const double bw = nu_to_beta_omega(wd.nu(mode), epsilon_purity);
    core.block<2, 2>(2 * mode, 2 * mode) = single_mode_propagator(bw, 1.0, s);
  }

  const RealMatrix s_inv = symplectic_inverse(wd.s, delta);
  ImaginaryTimePropagator out;
  out.source_cov = cov;
  out.s = s;
  out.matrix = s_inv.cast<Complex>() * core * wd.s.cast<Complex>();
  return out;
}

}  // namespace qdeconv
