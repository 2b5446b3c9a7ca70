#pragma once

#include <Eigen/Core>

#include <string_view>

namespace daelti {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Largest principal angle under which two subspaces compare equal.
inline constexpr double kSubspaceAngleTol = 1e-8;

/// Default tolerance of the geometric algorithms, relative to problem scale.
inline constexpr double kGeometryTol = 1e-9;

/// Full singular value decomposition M = U diag(s) V^T.
/// U is rows x rows, V is cols x cols, s is sorted in decreasing order.
struct Svd {
  Matrix U;
  Vector s;
  Matrix V;
};

Svd full_svd(const Matrix& M);

/// max(rows, cols) * machine epsilon.
double default_rank_tol(const Matrix& M);

/// Number of singular values above tol * sigma_max (above tol when M == 0).
Index rank(const Matrix& M, double tol);
Index rank(const Matrix& M);

/// Number of singular values strictly above an absolute threshold.
Index rank_abs(const Matrix& M, double threshold);

/// Moore-Penrose pseudoinverse, truncating singular values <= tol * sigma_max.
Matrix pinv(const Matrix& M, double tol);
Matrix pinv(const Matrix& M);

/// Spectral norm (largest singular value); 0 for empty matrices.
double norm2(const Matrix& M);

/// Largest real part of the eigenvalues of a square matrix; -inf when empty.
double spectral_abscissa(const Matrix& A);

/// Block-diagonal matrix with the given blocks.
Matrix blkdiag(const Matrix& A, const Matrix& B);

/// Throws ShapeError when M contains NaN or infinity.
void require_finite(const Matrix& M, std::string_view name);

/// Throws ShapeError unless M has the given shape.
void require_shape(const Matrix& M, Index rows, Index cols, std::string_view name);

/// Returns (A + A^T) / 2.
Matrix symmetrize(const Matrix& A);

}  // namespace daelti
