#pragma once

#include "daelti/linalg.hpp"

namespace daelti {

/// A linear subspace of R^n stored as an orthonormal basis (columns).
///
/// The zero subspace has a basis with zero columns. `tol` is the distance
/// below which a unit vector counts as contained.
class Subspace {
 public:
  Subspace() = default;

  /// Takes ownership of an orthonormal basis. Throws ShapeError if the
  /// columns are not orthonormal within 1e-10 or contain non-finite entries.
  explicit Subspace(Matrix basis, double tol = kSubspaceAngleTol);

  static Subspace zero(Index ambient_dim, double tol = kSubspaceAngleTol);
  static Subspace full(Index ambient_dim, double tol = kSubspaceAngleTol);

  Index dim() const { return basis_.cols(); }
  Index ambient_dim() const { return basis_.rows(); }
  const Matrix& basis() const { return basis_; }
  double tol() const { return tol_; }

  /// Orthogonal projector B B^T.
  Matrix projector() const;

  /// Norm of the component of w orthogonal to the subspace.
  double distance(const Vector& w) const;

  /// True when distance(w) <= tol * max(1, |w|).
  bool contains(const Vector& w) const;

  /// True when every basis vector of W lies in this subspace.
  bool contains(const Subspace& W) const;

  Subspace orthogonal_complement() const;

 private:
  Matrix basis_ = Matrix(0, 0);
  double tol_ = kSubspaceAngleTol;
};

/// Column space of M; singular values <= tol * sigma_max are dropped.
Subspace image(const Matrix& M, double tol);
Subspace image(const Matrix& M);

/// Null space of M; dimension cols - rank(M, tol).
Subspace kernel(const Matrix& M, double tol);
Subspace kernel(const Matrix& M);

/// Column space / null space with an absolute singular value threshold.
Subspace image_abs(const Matrix& M, double threshold);
Subspace kernel_abs(const Matrix& M, double threshold);

Subspace sum(const Subspace& U, const Subspace& W);
Subspace intersect(const Subspace& U, const Subspace& W);

/// {x : M x in W}. Singular values of the projected map below tol * |M|_2
/// count as zero, so the threshold follows the scale of M rather than the
/// (possibly tiny) projected map.
Subspace preimage(const Matrix& M, const Subspace& W, double tol);

/// Sine of the largest principal angle between U and W (1 if dims differ).
double largest_principal_angle(const Subspace& U, const Subspace& W);

/// Mutual containment with the kSubspaceAngleTol threshold.
bool equal(const Subspace& U, const Subspace& W);

}  // namespace daelti
