#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <string>

#include "hdgmv/errors.hpp"
#include "hdgmv/types.hpp"

namespace hdgmv {

// Solves below this estimated reciprocal condition number are rejected; the
// analysis assumes n > p, so admissible inputs are comfortably invertible.
inline constexpr double kRcondFloor = 1e-12;

// Cholesky factorization of a symmetric positive definite matrix with an
// invertibility gate. The explicit inverse is never formed; A^{-1} x is one
// triangular solve pair against the cached factor.
class SpdSolver {
 public:
  SpdSolver(const Matrix& a, const std::string& context, double rcond_floor = kRcondFloor)
      : llt_(a) {
    if (llt_.info() != Eigen::Success)
      throw SingularMatrixError(context + ": matrix is not positive definite");
    rcond_ = llt_.rcond();
    if (!(rcond_ >= rcond_floor))
      throw SingularMatrixError(context + ": reciprocal condition number " +
                                std::to_string(rcond_) + " below floor " +
                                std::to_string(rcond_floor));
  }

  Vector solve(const Vector& rhs) const { return llt_.solve(rhs); }
  double rcond() const { return rcond_; }

 private:
  Eigen::LLT<Matrix> llt_;
  double rcond_ = 0.0;
};

// 1' A^{-1} 1 for an SPD matrix A.
inline double ones_quadform_inverse(const SpdSolver& solver, Index p) {
  const Vector ones = Vector::Ones(p);
  return ones.dot(solver.solve(ones));
}

// Symmetric principal square root via spectral decomposition: Q sqrt(L) Q'.
inline Matrix spd_sqrt(const Matrix& a) {
  Eigen::SelfAdjointEigenSolver<Matrix> eig(a);
  if (eig.info() != Eigen::Success) throw SingularMatrixError("spd_sqrt: eigendecomposition failed");
  if (eig.eigenvalues().minCoeff() <= 0.0)
    throw SingularMatrixError("spd_sqrt: matrix is not positive definite (min eigenvalue " +
                              std::to_string(eig.eigenvalues().minCoeff()) + ")");
  return eig.eigenvectors() * eig.eigenvalues().cwiseSqrt().asDiagonal() *
         eig.eigenvectors().transpose();
}

}  // namespace hdgmv
