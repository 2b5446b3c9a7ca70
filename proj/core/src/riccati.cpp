#include "daelti/riccati.hpp"

#include "daelti/errors.hpp"
#include "daelti/schur.hpp"

#include <Eigen/Dense>

#include <cmath>

namespace daelti {

Matrix solve_lyapunov(const Matrix& A, const Matrix& Q) {
  const Index n = A.rows();
  require_shape(A, n, n, "solve_lyapunov A");
  require_shape(Q, n, n, "solve_lyapunov Q");
  if (n == 0) return Matrix(0, 0);

  // A = U T U^H, so A^T = U T^H U^H and Y = U^H X U solves T^H Y + Y T = -U^H Q U.
  const ComplexSchurForm f = complex_schur(A);
  const ComplexMatrix& T = f.T;
  const ComplexMatrix C = -(f.U.adjoint() * Q.cast<std::complex<double>>() * f.U);
  const ComplexMatrix Th = T.adjoint();
  ComplexMatrix Y = ComplexMatrix::Zero(n, n);
  const double scale = std::max(1.0, T.cwiseAbs().maxCoeff());
  for (Index j = 0; j < n; ++j) {
    Eigen::VectorXcd rhs = C.col(j);
    if (j > 0) rhs.noalias() -= Y.leftCols(j) * T.col(j).head(j);
    ComplexMatrix lhs = Th;
    lhs.diagonal().array() += T(j, j);
    for (Index i = 0; i < n; ++i) {
      if (std::abs(lhs(i, i)) <= 1e-14 * scale) {
        throw Error("solve_lyapunov: A and -A^T have a common eigenvalue");
      }
    }
    Y.col(j) = lhs.triangularView<Eigen::Lower>().solve(rhs);
  }
  const Matrix X = (f.U * Y * f.U.adjoint()).real();
  return symmetrize(X);
}

Matrix hamiltonian_gain(const Matrix& A, const Matrix& B, const Matrix& Q) {
  const Index n = A.rows();
  if (n == 0) return Matrix(B.cols(), 0);
  Matrix H(2 * n, 2 * n);
  H << A, -B * B.transpose(), -Q, -A.transpose();
  ComplexSchurForm f = complex_schur(H);
  const Index s = reorder_schur(f, [](std::complex<double> l) { return l.real() < 0.0; });
  if (s != n) {
    throw NoStabilizingStart("hamiltonian_gain: Hamiltonian has eigenvalues on the imaginary axis");
  }
  const ComplexMatrix X1 = f.U.topLeftCorner(n, n);
  const ComplexMatrix X2 = f.U.bottomLeftCorner(n, n);
  Eigen::FullPivLU<ComplexMatrix> lu(X1.transpose());
  if (!lu.isInvertible()) {
    throw NoStabilizingStart("hamiltonian_gain: stable subspace is not a graph");
  }
  const Matrix P = symmetrize(lu.solve(X2.transpose()).transpose().real());
  return B.transpose() * P;
}

CareSolution newton_kleinman(const Matrix& A, const Matrix& B, const Matrix& Q, const Matrix& K0, double tol,
                             int max_iter) {
  const Index n = A.rows();
  require_shape(B, n, B.cols(), "newton_kleinman B");
  require_shape(Q, n, n, "newton_kleinman Q");
  require_shape(K0, B.cols(), n, "newton_kleinman K0");
  CareSolution out;
  if (n == 0) {
    out.P = Matrix(0, 0);
    out.K = Matrix(B.cols(), 0);
    return out;
  }
  if (!(spectral_abscissa(A - B * K0) < 0.0)) {
    throw NoStabilizingStart("newton_kleinman: initial gain is not stabilizing");
  }
  Matrix K = K0;
  Matrix P = Matrix::Zero(n, n);
  for (int it = 1; it <= max_iter; ++it) {
    const Matrix Ak = A - B * K;
    const Matrix Pn = solve_lyapunov(Ak, Q + K.transpose() * K);
    const double change = (Pn - P).cwiseAbs().maxCoeff();
    P = Pn;
    K = B.transpose() * P;
    out.iterations = it;
    if (it > 1 && change <= tol * (1.0 + P.cwiseAbs().maxCoeff())) break;
  }
  out.P = P;
  out.K = K;
  out.residual = (A.transpose() * P + P * A - P * B * B.transpose() * P + Q).cwiseAbs().maxCoeff();
  return out;
}

namespace {

Matrix inverse_sqrt_spd(const Matrix& R) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrize(R));
  if (es.eigenvalues().size() > 0 && !(es.eigenvalues().minCoeff() > 0.0)) {
    throw ShapeError("input weight must be positive definite");
  }
  return es.eigenvectors() * es.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() *
         es.eigenvectors().transpose();
}

}  // namespace

CareSolution solve_care(const Matrix& A, const Matrix& B, const Matrix& Q, const Matrix& R) {
  const Index n = A.rows();
  require_shape(A, n, n, "solve_care A");
  require_shape(B, n, B.cols(), "solve_care B");
  require_shape(R, B.cols(), B.cols(), "solve_care R");
  const Matrix Rih = inverse_sqrt_spd(R);
  const Matrix Bh = B * Rih;
  const Matrix Qs = symmetrize(Q);
  const Matrix K0 = hamiltonian_gain(A, Bh, Qs);
  CareSolution sol = newton_kleinman(A, Bh, Qs, K0);
  sol.K = Rih * sol.K;
  sol.residual = care_residual(A, B, Qs, R, sol.P);
  return sol;
}

double care_residual(const Matrix& A, const Matrix& B, const Matrix& Q, const Matrix& R, const Matrix& P) {
  if (A.rows() == 0) return 0.0;
  const Matrix BtP = B.transpose() * P;
  const Matrix res = A.transpose() * P + P * A - BtP.transpose() * R.ldlt().solve(BtP) + Q;
  return res.cwiseAbs().maxCoeff();
}

}  // namespace daelti
