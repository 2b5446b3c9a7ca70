#pragma once

#include "daelti/linalg.hpp"

namespace daelti {

/// Solves A^T X + X A + Q = 0 by the Bartels-Stewart method on the complex
/// Schur form of A. Throws ShapeError on mismatched shapes and Error when
/// A and -A^T share an eigenvalue.
Matrix solve_lyapunov(const Matrix& A, const Matrix& Q);

struct CareSolution {
  Matrix P;
  Matrix K;
  int iterations = 0;
  double residual = 0.0;
};

/// Stabilizing gain K = B^T X from the stable invariant subspace of the
/// Hamiltonian [[A, -B B^T], [-Q, -A^T]] (unit input weight).
Matrix hamiltonian_gain(const Matrix& A, const Matrix& B, const Matrix& Q);

/// Newton-Kleinman iteration for A^T P + P A - P B B^T P + Q = 0 starting
/// from a stabilizing K0. Throws NoStabilizingStart if A - B K0 is not stable.
CareSolution newton_kleinman(const Matrix& A, const Matrix& B, const Matrix& Q, const Matrix& K0,
                             double tol = 1e-13, int max_iter = 60);

/// Stabilizing solution of A^T P + P A - P B R^{-1} B^T P + Q = 0, with
/// K = R^{-1} B^T P. R must be symmetric positive definite.
CareSolution solve_care(const Matrix& A, const Matrix& B, const Matrix& Q, const Matrix& R);

/// Residual A^T P + P A - P B R^{-1} B^T P + Q (max-abs entry).
double care_residual(const Matrix& A, const Matrix& B, const Matrix& Q, const Matrix& R, const Matrix& P);

}  // namespace daelti
