#include "daelti/schur.hpp"

#include "daelti/errors.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <vector>

namespace daelti {

ComplexSchurForm complex_schur(const Matrix& A) {
  if (A.rows() != A.cols()) throw ShapeError("complex_schur: matrix must be square");
  ComplexSchurForm f;
  if (A.rows() == 0) {
    f.U = ComplexMatrix(0, 0);
    f.T = ComplexMatrix(0, 0);
    return f;
  }
  Eigen::ComplexSchur<ComplexMatrix> cs(A.cast<std::complex<double>>());
  if (cs.info() != Eigen::Success) throw Error("complex_schur: QR iteration did not converge");
  f.U = cs.matrixU();
  f.T = cs.matrixT();
  return f;
}

namespace {

// Swaps the diagonal entries at positions p and p+1.
void swap_adjacent(ComplexSchurForm& f, Index p) {
  using C = std::complex<double>;
  const C t11 = f.T(p, p);
  const C t12 = f.T(p, p + 1);
  const C t22 = f.T(p + 1, p + 1);
  const C x1 = t12;
  const C x2 = t22 - t11;
  const double nrm = std::hypot(std::abs(x1), std::abs(x2));
  if (nrm == 0.0) return;
  const C c = x1 / nrm;
  const C s = x2 / nrm;
  Eigen::Matrix2cd Q;
  Q << c, -std::conj(s), s, std::conj(c);
  f.T.middleRows(p, 2) = Q.adjoint() * f.T.middleRows(p, 2);
  f.T.middleCols(p, 2) = f.T.middleCols(p, 2) * Q;
  f.U.middleCols(p, 2) = f.U.middleCols(p, 2) * Q;
  f.T(p + 1, p) = 0.0;
}

}  // namespace

Index reorder_schur(ComplexSchurForm& f, const std::function<bool(std::complex<double>)>& select) {
  const Index n = f.T.rows();
  Index next = 0;
  for (Index j = 0; j < n; ++j) {
    if (!select(f.T(j, j))) continue;
    for (Index p = j - 1; p >= next; --p) swap_adjacent(f, p);
    ++next;
  }
  return next;
}

Subspace stable_invariant_subspace(const Matrix& A, double tol_eig) {
  const Index n = A.rows();
  if (n == 0) return Subspace::zero(0);
  ComplexSchurForm f = complex_schur(A);
  const Index s = reorder_schur(f, [tol_eig](std::complex<double> l) { return l.real() < -tol_eig; });
  if (s == 0) return Subspace::zero(n);
  Matrix parts(n, 2 * s);
  parts << f.U.leftCols(s).real(), f.U.leftCols(s).imag();
  const Svd d = full_svd(parts);
  return Subspace(d.U.leftCols(s));
}

}  // namespace daelti
