#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <string>
#include <utility>

#include "qdeconv/errors.hpp"
#include "qdeconv/gaussian.hpp"
#include "qdeconv/imtime.hpp"
#include "qdeconv/symplectic.hpp"
#include "qdeconv/types.hpp"

namespace qdeconv {

// Transpose of a noise channel with respect to a metric, restricted to the
// first-moment sector: the matrix X_* with N_*^dagger(phi_f) = phi_{X_* f}.
// Carries everything needed to evaluate the adjointness pairing afterwards.
struct ReconstructionKernel {
  Metric metric = Metric::Bures;
  RealMatrix x_star;
  RealMatrix prior_cov;  // A
  RealMatrix noisy_cov;  // B = X^T A X + Y
  RealMatrix channel_x;
  RealMatrix channel_y;
};

// Raw complex product behind the square-root-metric kernel,
//   R_b (B + (i/2) Delta)^{-1} X^T (A + (i/2) Delta) R_a,
// with the flows R_b = R^B_{-1/2}, R_a = R^A_{1/2} supplied by the caller.
// Exposed separately so checks can substitute Delta = 0 and R = 1, which must
// reproduce the Bures formula B^{-1} X^T A exactly (the commutative limit).
inline ComplexMatrix metric_kernel_product(const RealMatrix& prior_cov, const RealMatrix& noisy_cov,
                                           const RealMatrix& channel_x, const RealMatrix& delta,
                                           const ComplexMatrix& flow_b_back,
                                           const ComplexMatrix& flow_a_fwd) {
  const ComplexMatrix ka = prior_cov.cast<Complex>() + Complex(0.0, 0.5) * delta.cast<Complex>();
  const ComplexMatrix kb = noisy_cov.cast<Complex>() + Complex(0.0, 0.5) * delta.cast<Complex>();
  const ComplexMatrix rhs = channel_x.transpose().cast<Complex>() * ka * flow_a_fwd;
  Eigen::PartialPivLU<ComplexMatrix> lu(kb);
  return flow_b_back * lu.solve(rhs);
}

namespace detail {

inline void require_model_dims(const GaussianState& prior, const GaussianChannel& chan,
                               const char* who) {
  require_even_square(prior.covariance.rows(), prior.covariance.cols(), who);
  require_even_square(chan.x.rows(), chan.x.cols(), who);
  if (chan.y.rows() != chan.x.rows() || chan.y.cols() != chan.x.cols())
    throw DimensionError(std::string(who) + ": X and Y sizes differ");
  if (prior.covariance.rows() != chan.x.rows())
    throw DimensionError(std::string(who) + ": prior and channel dimensions differ");
}

// imaginary part must be roundoff relative to the kernel scale
inline RealMatrix take_real_part(const ComplexMatrix& m, const char* who) {
  const double scale = m.cwiseAbs().maxCoeff();
  const double imag_max = m.imag().cwiseAbs().maxCoeff();
  if (imag_max > 1e-8 * scale)
    throw NumericalError(std::string(who) + ": kernel has non-negligible imaginary part (" +
                         std::to_string(imag_max) + " against scale " + std::to_string(scale) + ")");
  return m.real();
}

}  // namespace detail

// Square-root-metric transpose of (X, Y) against the prior A:
//   X_* = R^B_{-1/2} (B + (i/2) Delta)^{-1} X^T (A + (i/2) Delta) R^A_{1/2}.
// The product is provably real; realness is asserted, not assumed.  Both A
// and B must sit above the purity floor for the flows to exist.
inline ReconstructionKernel transpose_kernel_sqrt(const GaussianState& prior,
                                                  const GaussianChannel& chan,
                                                  double epsilon_purity = kEpsilonPurity) {
  detail::require_model_dims(prior, chan, "transpose_kernel_sqrt");
  const RealMatrix delta = symplectic_form(prior.n_modes());
  const RealMatrix b = chan.x.transpose() * prior.covariance * chan.x + chan.y;

  // one purity check up front so the error names the offending eigenvalue
  // (it also guards the (B + (i/2) Delta) inverse, whose smallest eigenvalue
  // is min_k nu_k - 1/2)
  const RealVector nu_b = symplectic_eigenvalues(b, delta);
  if (!(nu_b.minCoeff() > 0.5 + epsilon_purity))
    throw PuritySingularityError(
        "transpose_kernel_sqrt: noisy covariance has symplectic eigenvalue " +
        std::to_string(nu_b.minCoeff()) + ", within " + std::to_string(epsilon_purity) +
        " of the pure-state floor 1/2");

  const ComplexMatrix flow_b_back = propagator(b, delta, -0.5, epsilon_purity).matrix;
  const ComplexMatrix flow_a_fwd = propagator(prior.covariance, delta, 0.5, epsilon_purity).matrix;
  const ComplexMatrix product =
      metric_kernel_product(prior.covariance, b, chan.x, delta, flow_b_back, flow_a_fwd);

  ReconstructionKernel k;
  k.metric = Metric::SquareRoot;
  k.x_star = detail::take_real_part(product, "transpose_kernel_sqrt");
  k.prior_cov = prior.covariance;
  k.noisy_cov = b;
  k.channel_x = chan.x;
  k.channel_y = chan.y;
  return k;
}

// Bures-metric transpose: X_* = B^{-1} X^T A.
inline ReconstructionKernel transpose_kernel_bures(const GaussianState& prior,
                                                   const GaussianChannel& chan) {
  detail::require_model_dims(prior, chan, "transpose_kernel_bures");
  const RealMatrix b = chan.x.transpose() * prior.covariance * chan.x + chan.y;

  Eigen::FullPivLU<RealMatrix> lu(b);
  if (!lu.isInvertible())
    throw SingularMatrixError("transpose_kernel_bures: noisy covariance is singular");

  ReconstructionKernel k;
  k.metric = Metric::Bures;
  k.x_star = lu.solve(chan.x.transpose() * prior.covariance);
  k.prior_cov = prior.covariance;
  k.noisy_cov = b;
  k.channel_x = chan.x;
  k.channel_y = chan.y;
  return k;
}

// Metric dispatch.  The classical Fisher metric is the Delta = 0, R = 1
// limit of the square-root formula, which collapses to the Bures expression;
// it shares that code path and is tagged separately.
inline ReconstructionKernel transpose_kernel(Metric metric, const GaussianState& prior,
                                             const GaussianChannel& chan,
                                             double epsilon_purity = kEpsilonPurity) {
  switch (metric) {
    case Metric::SquareRoot:
      return transpose_kernel_sqrt(prior, chan, epsilon_purity);
    case Metric::Bures:
      return transpose_kernel_bures(prior, chan);
    case Metric::ClassicalFisher: {
      ReconstructionKernel k = transpose_kernel_bures(prior, chan);
      k.metric = Metric::ClassicalFisher;
      return k;
    }
  }
  throw ParameterError("transpose_kernel: unknown metric");
}

// Defect of the adjointness pairing on a probe pair (f, g), normalised by the
// larger bilinear magnitude.  The pairing is conjugate-symmetric,
// (u, v) = sum_i conj(u_i) v_i.  For the square-root metric the weights are
// (A + (i/2) Delta) R^A_{1/2} and (B + (i/2) Delta) R^B_{1/2}; for Bures and
// classical Fisher they are plain A and B.
inline double adjointness_residual(const ReconstructionKernel& k, const ComplexVector& f,
                                   const ComplexVector& g,
                                   double epsilon_purity = kEpsilonPurity) {
  const Eigen::Index dim = k.x_star.rows();
  if (f.size() != dim || g.size() != dim)
    throw DimensionError("adjointness_residual: probe length does not match the kernel");

  Complex lhs, rhs;
  const ComplexVector xs_f = k.x_star.cast<Complex>() * f;
  if (k.metric == Metric::SquareRoot) {
    const RealMatrix delta = symplectic_form(dim / 2);
    const ComplexMatrix ka =
        k.prior_cov.cast<Complex>() + Complex(0.0, 0.5) * delta.cast<Complex>();
    const ComplexMatrix kb =
        k.noisy_cov.cast<Complex>() + Complex(0.0, 0.5) * delta.cast<Complex>();
    const ComplexMatrix flow_a = propagator(k.prior_cov, delta, 0.5, epsilon_purity).matrix;
    const ComplexMatrix flow_b = propagator(k.noisy_cov, delta, 0.5, epsilon_purity).matrix;
    lhs = f.dot(ka * (flow_a * (k.channel_x.cast<Complex>() * g)));
    rhs = xs_f.dot(kb * (flow_b * g));
  } else {
    lhs = f.dot(k.prior_cov.cast<Complex>() * (k.channel_x.cast<Complex>() * g));
    rhs = xs_f.dot(k.noisy_cov.cast<Complex>() * g);
  }
  return std::abs(lhs - rhs) / (std::max(std::abs(lhs), std::abs(rhs)) + 1e-300);
}

// Covariance recovery attached to the square-root transpose: feeding a
// measured covariance B' back through the kernel,
//   A' = X_*^T B' X_* + (A - X_*^T B X_*).
// B' = B returns the prior exactly; for the identity channel it returns B'.
inline RealMatrix petz_covariance_recovery(const ReconstructionKernel& k,
                                           const RealMatrix& measured_cov) {
  if (k.metric != Metric::SquareRoot)
    throw MetricMismatchError("petz_covariance_recovery: kernel metric is " +
                              std::string(to_string(k.metric)) + ", needs sqrt");
  if (measured_cov.rows() != k.noisy_cov.rows() || measured_cov.cols() != k.noisy_cov.cols())
    throw DimensionError("petz_covariance_recovery: measured covariance has the wrong size");
  return k.x_star.transpose() * measured_cov * k.x_star +
         (k.prior_cov - k.x_star.transpose() * k.noisy_cov * k.x_star);
}

}  // namespace qdeconv
