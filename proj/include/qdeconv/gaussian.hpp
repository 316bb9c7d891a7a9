#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <string>
#include <utility>

#include "qdeconv/errors.hpp"
#include "qdeconv/symplectic.hpp"
#include "qdeconv/types.hpp"

namespace qdeconv {

// Gaussian state of n modes: covariance A (2n x 2n, mode-major) plus first
// moments.  The vacuum is A = (1/2) * Identity.
struct GaussianState {
  RealMatrix covariance;
  RealVector mean;

  GaussianState() = default;
  explicit GaussianState(RealMatrix cov)
      : covariance(std::move(cov)), mean(RealVector::Zero(covariance.rows())) {}
  GaussianState(RealMatrix cov, RealVector mu) : covariance(std::move(cov)), mean(std::move(mu)) {}

  Eigen::Index dim() const { return covariance.rows(); }
  Eigen::Index n_modes() const { return covariance.rows() / 2; }
};

// Gaussian noise channel (X, Y): covariances map as A -> X^T A X + Y and
// first moments as mean -> X^T mean.
struct GaussianChannel {
  RealMatrix x;
  RealMatrix y;

  Eigen::Index dim() const { return x.rows(); }
  Eigen::Index n_modes() const { return x.rows() / 2; }
};

// Thermal covariance of a single mode: (1/2) coth(beta omega / 2) diag(1/omega, omega).
inline Eigen::Matrix2d thermal_mode_cov(double beta, double omega) {
  if (!(beta > 0.0) || !(omega > 0.0))
    throw ParameterError("thermal_mode_cov: beta and omega must be positive");
  const double a = 0.5 / std::tanh(0.5 * beta * omega);
  Eigen::Matrix2d out;
  out << a / omega, 0.0, 0.0, a * omega;
  return out;
}

struct ValidityReport {
  bool ok = false;
  double min_eig = 0.0;  // smallest eigenvalue of the checked Hermitian form
  std::string detail;
};

// A covariance is physical iff A + (i/2) Delta >= 0 (up to `slack` below zero).
inline ValidityReport validate_state(const GaussianState& state, double slack = kPositivitySlack) {
  detail::require_even_square(state.covariance.rows(), state.covariance.cols(), "validate_state");
  if (state.mean.size() != 0 && state.mean.size() != state.covariance.rows())
    throw DimensionError("validate_state: mean length does not match the covariance");

  const RealMatrix& a = state.covariance;
  const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
  if ((a - a.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    return {false, 0.0, "covariance is not symmetric"};

  const RealMatrix delta = symplectic_form(state.n_modes());
  const ComplexMatrix k = a.cast<Complex>() + Complex(0.0, 0.5) * delta.cast<Complex>();
  const double min_eig = hermitian_min_eig(k);
  if (min_eig < -slack)
    return {false, min_eig, "uncertainty bound violated: min eig " + std::to_string(min_eig)};
  return {true, min_eig, ""};
}

// Complete positivity of (X, Y).  Standard checks
//   Y + (i/2) Delta - (i/2) X^T Delta X >= 0,
// which accepts the identity channel (X = 1, Y = 0) with slack exactly 0.
// SignFlipped flips the sign of the X^T Delta X term; it is kept for
// comparison and rejects the identity channel outright.
enum class ChannelConstraintForm { Standard, SignFlipped };

inline ValidityReport validate_channel(const GaussianChannel& chan,
                                       ChannelConstraintForm form = ChannelConstraintForm::Standard,
                                       double slack = kPositivitySlack) {
  detail::require_even_square(chan.x.rows(), chan.x.cols(), "validate_channel");
  if (chan.y.rows() != chan.x.rows() || chan.y.cols() != chan.x.cols())
    throw DimensionError("validate_channel: X and Y sizes differ");

  const double scale = std::max(1.0, chan.y.cwiseAbs().maxCoeff());
  if ((chan.y - chan.y.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    return {false, 0.0, "noise matrix Y is not symmetric"};

  const RealMatrix delta = symplectic_form(chan.n_modes());
  const double sign = (form == ChannelConstraintForm::Standard) ? -1.0 : 1.0;
  const ComplexMatrix q = chan.y.cast<Complex>() + Complex(0.0, 0.5) * delta.cast<Complex>() +
                          Complex(0.0, sign * 0.5) *
                              (chan.x.transpose() * delta * chan.x).cast<Complex>();
  const double min_eig = hermitian_min_eig(q);
  if (min_eig < -slack)
    return {false, min_eig, "noise bound violated: min eig " + std::to_string(min_eig)};
  return {true, min_eig, ""};
}

// Push a state through a channel: B = X^T A X + Y, mean -> X^T mean.
inline GaussianState apply_channel(const GaussianChannel& chan, const GaussianState& state) {
  detail::require_even_square(chan.x.rows(), chan.x.cols(), "apply_channel");
  if (chan.y.rows() != chan.x.rows() || chan.y.cols() != chan.x.cols())
    throw DimensionError("apply_channel: X and Y sizes differ");
  if (state.covariance.rows() != chan.x.rows())
    throw DimensionError("apply_channel: channel and state dimensions differ");

  GaussianState out;
  out.covariance = chan.x.transpose() * state.covariance * chan.x + chan.y;
  out.mean = (state.mean.size() != 0) ? RealVector(chan.x.transpose() * state.mean)
                                      : RealVector::Zero(chan.x.rows());
  return out;
}

}  // namespace qdeconv
