#pragma once

#include "daelti/linalg.hpp"
#include "daelti/subspace.hpp"

namespace daelti {

/// State-space system  v' = A v + G g,  y = C v + D g.
class OdeLti {
 public:
  OdeLti() = default;
  OdeLti(Matrix A, Matrix G, Matrix C, Matrix D);

  const Matrix& A() const { return A_; }
  const Matrix& G() const { return G_; }
  const Matrix& C() const { return C_; }
  const Matrix& D() const { return D_; }
  Index states() const { return A_.rows(); }
  Index inputs() const { return G_.cols(); }
  Index outputs() const { return C_.rows(); }

  /// Largest spectral norm of the four matrices (1 if all are zero).
  double scale() const;

 private:
  Matrix A_ = Matrix(0, 0);
  Matrix G_ = Matrix(0, 0);
  Matrix C_ = Matrix(0, 0);
  Matrix D_ = Matrix(0, 0);
};

struct Simulation {
  Vector times;
  Matrix states;   // r x N
  Matrix outputs;  // p x N
};

/// Classical RK4 on a uniform grid. Column j of `inputs` is the input at
/// grid(j); the input is linear between nodes.
Simulation simulate(const OdeLti& sys, const Vector& v0, const Matrix& inputs, const Vector& grid);

/// Zero-input response sampled on a uniform grid, propagated with the
/// exact transition matrix exp(A h). Unlike RK4 it has no step-size
/// restriction for stiff stable systems.
Simulation propagate_free_response(const OdeLti& sys, const Vector& v0, const Vector& grid);

/// Largest subspace V with (A + G F) V in V and (C + D F) V = 0 for some F.
Subspace weakly_unobservable(const OdeLti& sys, double tol = kGeometryTol);

struct OutputNullingFriend {
  Matrix F;  // s x r, zero on the orthogonal complement of V
  Matrix L;  // s x k, orthonormal basis of ker D cap G^{-1}(V), or s x 1 zero
  bool zero_feedthrough() const;
};

/// Throws ResidualTooLarge when V is not output nulling.
OutputNullingFriend output_nulling_friend(const OdeLti& sys, const Subspace& V, double tol = kGeometryTol);

/// im [B, AB, ..., A^{r-1} B].
Subspace reachable_subspace(const Matrix& A, const Matrix& B, double tol = kGeometryTol);

/// Reachable subspace plus the invariant subspace of eigenvalues with
/// Re lambda < -tol_eig.
Subspace stabilizability_subspace(const Matrix& A, const Matrix& B, double tol = kGeometryTol,
                                  double tol_eig = 1e-9);

/// Matrices of the maps restricted to an invariant subspace V, in the
/// orthonormal basis of V. Throws NotInvariant unless A V in V and im G in V.
OdeLti restrict_to_invariant(const OdeLti& sys, const Subspace& V, double tol = kGeometryTol);

}  // namespace daelti
