#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <string>
#include <utility>

#include "qdeconv/errors.hpp"
#include "qdeconv/types.hpp"

namespace qdeconv {

// Phase space is ordered mode-major, (q1, p1, q2, p2, ...), so the symplectic
// form is block diagonal with [[0, 1], [-1, 0]] per mode.  The whole library
// assumes this ordering; any reordering happens at the I/O boundary.
template <typename Scalar = double>
PhaseMatrix<Scalar> symplectic_form(Eigen::Index n_modes) {
  if (n_modes < 1) throw DimensionError("symplectic_form: need at least one mode");
  PhaseMatrix<Scalar> d = PhaseMatrix<Scalar>::Zero(2 * n_modes, 2 * n_modes);
  for (Eigen::Index m = 0; m < n_modes; ++m) {
    d(2 * m, 2 * m + 1) = Scalar(1);
    d(2 * m + 1, 2 * m) = Scalar(-1);
  }
  return d;
}

namespace detail {

inline void require_even_square(Eigen::Index rows, Eigen::Index cols, const char* who) {
  if (rows != cols) throw DimensionError(std::string(who) + ": matrix must be square");
  if (rows < 2 || rows % 2 != 0)
    throw DimensionError(std::string(who) + ": phase-space dimension must be even and positive");
}

inline void require_symmetric(const RealMatrix& a, const char* who) {
  const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
  if ((a - a.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale)
    throw InvalidStateError(std::string(who) + ": matrix is not symmetric");
}

// Symmetric positive-definite square root; throws if the matrix is not SPD.
inline RealMatrix spd_sqrt(const RealMatrix& a, const char* who) {
  Eigen::SelfAdjointEigenSolver<RealMatrix> es(a);
  if (es.info() != Eigen::Success)
    throw NumericalError(std::string(who) + ": symmetric eigensolver failed");
  const double min_eig = es.eigenvalues().minCoeff();
  if (!(min_eig > 0.0))
    throw InvalidStateError(std::string(who) + ": matrix is not positive definite (min eigenvalue " +
                            std::to_string(min_eig) + ")");
  return es.operatorSqrt();
}

}  // namespace detail

// Smallest eigenvalue of the Hermitian part (M + M^H)/2.  Callers hand in
// matrices that are Hermitian up to roundoff; symmetrising first keeps the
// solver on the stable self-adjoint path.
template <typename Derived>
double hermitian_min_eig(const Eigen::MatrixBase<Derived>& m) {
  if (m.rows() != m.cols()) throw DimensionError("hermitian_min_eig: matrix must be square");
  using Scalar = typename Derived::Scalar;
  using Real = typename Eigen::NumTraits<Scalar>::Real;
  PhaseMatrix<Scalar> h = (m.derived() + m.derived().adjoint()) * Real(0.5);
  Eigen::SelfAdjointEigenSolver<PhaseMatrix<Scalar>> es(h, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success)
    throw NumericalError("hermitian_min_eig: eigensolver failed");
  return es.eigenvalues().minCoeff();
}

// Symplectic spectrum of an SPD covariance, descending.  Works through the
// singular values of sqrt(A) Delta sqrt(A), which come in equal pairs
// (nu_k, nu_k); this route is independent of williamson() below and is used
// to cross-check it.
inline RealVector symplectic_eigenvalues(const RealMatrix& a, const RealMatrix& delta) {
  detail::require_even_square(a.rows(), a.cols(), "symplectic_eigenvalues");
  if (delta.rows() != a.rows() || delta.cols() != a.cols())
    throw DimensionError("symplectic_eigenvalues: form and covariance sizes differ");
  detail::require_symmetric(a, "symplectic_eigenvalues");
  const RealMatrix root = detail::spd_sqrt(a, "symplectic_eigenvalues");
  const RealMatrix w = root * delta * root;
  Eigen::JacobiSVD<RealMatrix> svd(w);
  const Eigen::Index n = a.rows() / 2;
  RealVector nu(n);
  for (Eigen::Index m = 0; m < n; ++m)
    nu(m) = 0.5 * (svd.singularValues()(2 * m) + svd.singularValues()(2 * m + 1));
  return nu;
}

struct WilliamsonDecomposition {
  RealMatrix s;   // symplectic congruence: s^T d() s = a and s^T delta s = delta
  RealVector nu;  // symplectic eigenvalues, descending, one per mode

  // normal-form covariance blkdiag(nu_k, nu_k)
  RealMatrix d() const {
    const Eigen::Index n = nu.size();
    RealMatrix out = RealMatrix::Zero(2 * n, 2 * n);
    for (Eigen::Index m = 0; m < n; ++m) {
      out(2 * m, 2 * m) = nu(m);
      out(2 * m + 1, 2 * m + 1) = nu(m);
    }
    return out;
  }
};

// Williamson normal form of an SPD covariance: a = S^T D S with S symplectic
// and D = blkdiag(nu_k, nu_k).
//
// Construction: with M = sqrt(a), the matrix i M Delta M is Hermitian with
// eigenvalues +-nu_k.  An eigenvector z = u + i v for +nu satisfies
// M Delta M u = nu v, M Delta M v = -nu u and |u| = |v| = 1/sqrt(2), so the
// columns (sqrt(2) v, sqrt(2) u) assemble an orthogonal Q with
// Q^T (M Delta M) Q = blkdiag(nu_k J), J = [[0,1],[-1,0]].  Then
// S = D^{-1/2} Q^T M does the job; both residuals are verified before return.
inline WilliamsonDecomposition williamson(const RealMatrix& a, const RealMatrix& delta) {
  detail::require_even_square(a.rows(), a.cols(), "williamson");
  if (delta.rows() != a.rows() || delta.cols() != a.cols())
    throw DimensionError("williamson: form and covariance sizes differ");
  detail::require_symmetric(a, "williamson");

  const Eigen::Index dim = a.rows();
  const Eigen::Index n = dim / 2;
  const RealMatrix root = detail::spd_sqrt(a, "williamson");
  const RealMatrix w = root * delta * root;  // antisymmetric
  const ComplexMatrix h = Complex(0.0, 1.0) * w.cast<Complex>();

  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h);
  if (es.info() != Eigen::Success) throw NumericalError("williamson: eigensolver failed");

  RealVector nu(n);
  RealMatrix q(dim, dim);
  const double sqrt2 = std::sqrt(2.0);
  for (Eigen::Index mode = 0; mode < n; ++mode) {
    // eigenvalues come sorted ascending; the top n are the +nu_k, descending
    const Eigen::Index idx = dim - 1 - mode;
    const double lam = es.eigenvalues()(idx);
    if (!(lam > 0.0))
      throw NumericalError("williamson: nonpositive symplectic eigenvalue " + std::to_string(lam));
    nu(mode) = lam;
    const ComplexVector z = es.eigenvectors().col(idx);
    q.col(2 * mode) = sqrt2 * z.imag();
    q.col(2 * mode + 1) = sqrt2 * z.real();
  }

  RealMatrix s = q.transpose() * root;
  for (Eigen::Index mode = 0; mode < n; ++mode) {
    const double r = 1.0 / std::sqrt(nu(mode));
    s.row(2 * mode) *= r;
    s.row(2 * mode + 1) *= r;
  }

  WilliamsonDecomposition out{std::move(s), std::move(nu)};

  const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
  const double res_form = (out.s.transpose() * delta * out.s - delta).cwiseAbs().maxCoeff();
  const double res_cov = (out.s.transpose() * out.d() * out.s - a).cwiseAbs().maxCoeff();
  if (res_form > 1e-8 || res_cov > 1e-8 * scale)
    throw NumericalError("williamson: residuals out of tolerance (form " + std::to_string(res_form) +
                         ", covariance " + std::to_string(res_cov / scale) + ")");
  return out;
}

// Inverse of a symplectic matrix without a factorisation: S^{-1} = -Delta S^T Delta.
inline RealMatrix symplectic_inverse(const RealMatrix& s, const RealMatrix& delta) {
  return -delta * s.transpose() * delta;
}

}  // namespace qdeconv
