#pragma once

#include "daelti/linalg.hpp"
#include "daelti/subspace.hpp"

#include <Eigen/Core>

#include <complex>
#include <functional>

namespace daelti {

using ComplexMatrix = Eigen::MatrixXcd;

/// A = U T U^H with U unitary and T upper triangular.
struct ComplexSchurForm {
  ComplexMatrix U;
  ComplexMatrix T;
};

ComplexSchurForm complex_schur(const Matrix& A);

/// Moves the eigenvalues accepted by `select` to the leading diagonal
/// positions with adjacent Givens swaps, updating U and T in place.
/// Returns the number of selected eigenvalues.
Index reorder_schur(ComplexSchurForm& form, const std::function<bool(std::complex<double>)>& select);

/// Real orthonormal basis of the invariant subspace of A belonging to the
/// eigenvalues with Re(lambda) < -tol_eig. Marginal eigenvalues are excluded.
Subspace stable_invariant_subspace(const Matrix& A, double tol_eig = 1e-9);

}  // namespace daelti
