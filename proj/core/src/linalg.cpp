#include "daelti/linalg.hpp"

#include "daelti/errors.hpp"
#include "daelti/subspace.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>

namespace daelti {

Svd full_svd(const Matrix& M) {
  Svd out;
  if (M.rows() == 0 || M.cols() == 0) {
    out.U = Matrix::Identity(M.rows(), M.rows());
    out.V = Matrix::Identity(M.cols(), M.cols());
    out.s = Vector(0);
    return out;
  }
  Eigen::JacobiSVD<Matrix> svd(M, Eigen::ComputeFullU | Eigen::ComputeFullV);
  out.U = svd.matrixU();
  out.s = svd.singularValues();
  out.V = svd.matrixV();
  return out;
}

double default_rank_tol(const Matrix& M) {
  return static_cast<double>(std::max(M.rows(), M.cols())) *
         std::numeric_limits<double>::epsilon();
}

namespace {

Index count_above(const Vector& s, double threshold) {
  Index r = 0;
  for (Index i = 0; i < s.size(); ++i) {
    if (s(i) > threshold) ++r;
  }
  return r;
}

double relative_threshold(const Vector& s, double tol) {
  const double smax = s.size() > 0 ? s(0) : 0.0;
  return smax > 0.0 ? tol * smax : tol;
}

}  // namespace

Index rank(const Matrix& M, double tol) {
  if (M.size() == 0) return 0;
  Eigen::JacobiSVD<Matrix> svd(M);
  const Vector& s = svd.singularValues();
  return count_above(s, relative_threshold(s, tol));
}

Index rank(const Matrix& M) { return rank(M, default_rank_tol(M)); }

Index rank_abs(const Matrix& M, double threshold) {
  if (M.size() == 0) return 0;
  Eigen::JacobiSVD<Matrix> svd(M);
  return count_above(svd.singularValues(), threshold);
}

Matrix pinv(const Matrix& M, double tol) {
  Matrix out = Matrix::Zero(M.cols(), M.rows());
  if (M.size() == 0) return out;
  Eigen::JacobiSVD<Matrix> svd(M, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Vector& s = svd.singularValues();
  const double thr = relative_threshold(s, tol);
  for (Index i = 0; i < s.size(); ++i) {
    if (s(i) > thr) {
      out.noalias() += svd.matrixV().col(i) * (1.0 / s(i)) * svd.matrixU().col(i).transpose();
    }
  }
  return out;
}

Matrix pinv(const Matrix& M) { return pinv(M, default_rank_tol(M)); }

double norm2(const Matrix& M) {
  if (M.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(M);
  return svd.singularValues()(0);
}

double spectral_abscissa(const Matrix& A) {
  if (A.rows() != A.cols()) throw ShapeError("spectral_abscissa: matrix must be square");
  if (A.rows() == 0) return -std::numeric_limits<double>::infinity();
  Eigen::EigenSolver<Matrix> es(A, false);
  return es.eigenvalues().real().maxCoeff();
}

Matrix blkdiag(const Matrix& A, const Matrix& B) {
  Matrix out = Matrix::Zero(A.rows() + B.rows(), A.cols() + B.cols());
  out.topLeftCorner(A.rows(), A.cols()) = A;
  out.bottomRightCorner(B.rows(), B.cols()) = B;
  return out;
}

void require_finite(const Matrix& M, std::string_view name) {
  if (!M.allFinite()) {
    throw ShapeError(std::string(name) + ": non-finite entry");
  }
}

void require_shape(const Matrix& M, Index rows, Index cols, std::string_view name) {
  if (M.rows() != rows || M.cols() != cols) {
    std::ostringstream os;
    os << name << ": expected " << rows << "x" << cols << ", got " << M.rows() << "x" << M.cols();
    throw ShapeError(os.str());
  }
}

Matrix symmetrize(const Matrix& A) { return 0.5 * (A + A.transpose()); }

// ---------------------------------------------------------------------------
// Subspace

Subspace::Subspace(Matrix basis, double tol) : basis_(std::move(basis)), tol_(tol) {
  require_finite(basis_, "Subspace basis");
  if (!(tol_ > 0.0)) throw ShapeError("Subspace: tolerance must be positive");
  if (basis_.cols() > basis_.rows()) throw ShapeError("Subspace: more basis vectors than ambient dimension");
  if (basis_.cols() > 0) {
    const double err =
        (basis_.transpose() * basis_ - Matrix::Identity(basis_.cols(), basis_.cols())).cwiseAbs().maxCoeff();
    if (err > 1e-10) throw ShapeError("Subspace: basis is not orthonormal");
  }
}

Subspace Subspace::zero(Index ambient_dim, double tol) { return Subspace(Matrix(ambient_dim, 0), tol); }

Subspace Subspace::full(Index ambient_dim, double tol) {
  return Subspace(Matrix::Identity(ambient_dim, ambient_dim), tol);
}

Matrix Subspace::projector() const { return basis_ * basis_.transpose(); }

double Subspace::distance(const Vector& w) const {
  if (w.size() != ambient_dim()) throw ShapeError("Subspace::distance: dimension mismatch");
  if (dim() == 0) return w.norm();
  return (w - basis_ * (basis_.transpose() * w)).norm();
}

bool Subspace::contains(const Vector& w) const { return distance(w) <= tol_ * std::max(1.0, w.norm()); }

bool Subspace::contains(const Subspace& W) const {
  if (W.ambient_dim() != ambient_dim()) throw ShapeError("Subspace::contains: ambient mismatch");
  for (Index j = 0; j < W.dim(); ++j) {
    if (distance(W.basis().col(j)) > tol_) return false;
  }
  return true;
}

Subspace Subspace::orthogonal_complement() const {
  if (dim() == 0) return full(ambient_dim(), tol_);
  const Svd d = full_svd(basis_);
  return Subspace(d.U.rightCols(ambient_dim() - dim()), tol_);
}

Subspace image_abs(const Matrix& M, double threshold) {
  if (M.cols() == 0 || M.rows() == 0) return Subspace::zero(M.rows());
  const Svd d = full_svd(M);
  const Index r = count_above(d.s, threshold);
  return Subspace(d.U.leftCols(r));
}

Subspace kernel_abs(const Matrix& M, double threshold) {
  if (M.cols() == 0) return Subspace::zero(0);
  if (M.rows() == 0) return Subspace::full(M.cols());
  const Svd d = full_svd(M);
  const Index r = count_above(d.s, threshold);
  return Subspace(d.V.rightCols(M.cols() - r));
}

Subspace image(const Matrix& M, double tol) {
  if (M.size() == 0) return Subspace::zero(M.rows());
  const Svd d = full_svd(M);
  const Index r = count_above(d.s, relative_threshold(d.s, tol));
  return Subspace(d.U.leftCols(r));
}

Subspace image(const Matrix& M) { return image(M, default_rank_tol(M)); }

Subspace kernel(const Matrix& M, double tol) {
  if (M.cols() == 0) return Subspace::zero(0);
  if (M.rows() == 0) return Subspace::full(M.cols());
  const Svd d = full_svd(M);
  const Index r = count_above(d.s, relative_threshold(d.s, tol));
  return Subspace(d.V.rightCols(M.cols() - r));
}

Subspace kernel(const Matrix& M) { return kernel(M, default_rank_tol(M)); }

namespace {

void require_same_ambient(const Subspace& U, const Subspace& W, const char* op) {
  if (U.ambient_dim() != W.ambient_dim()) {
    throw ShapeError(std::string(op) + ": ambient dimension mismatch");
  }
}

}  // namespace

Subspace sum(const Subspace& U, const Subspace& W) {
  require_same_ambient(U, W, "sum");
  const double tol = std::max(U.tol(), W.tol());
  Matrix stacked(U.ambient_dim(), U.dim() + W.dim());
  stacked << U.basis(), W.basis();
  Subspace s = image_abs(stacked, tol);
  return Subspace(s.basis(), tol);
}

Subspace intersect(const Subspace& U, const Subspace& W) {
  require_same_ambient(U, W, "intersect");
  const double tol = std::max(U.tol(), W.tol());
  const Index n = U.ambient_dim();
  if (U.dim() == 0 || W.dim() == 0) return Subspace::zero(n, tol);
  Matrix stacked(n, U.dim() + W.dim());
  stacked << U.basis(), -W.basis();
  const Subspace null = kernel_abs(stacked, tol);
  if (null.dim() == 0) return Subspace::zero(n, tol);
  // Each null vector (a; b) gives U a = W b; average both representations.
  const Matrix candidates =
      0.5 * (U.basis() * null.basis().topRows(U.dim()) + W.basis() * null.basis().bottomRows(W.dim()));
  const Svd d = full_svd(candidates);
  return Subspace(d.U.leftCols(null.dim()), tol);
}

Subspace preimage(const Matrix& M, const Subspace& W, double tol) {
  if (M.rows() != W.ambient_dim()) throw ShapeError("preimage: map codomain does not match subspace");
  const Index n = M.cols();
  const Matrix complement = W.orthogonal_complement().basis();
  if (complement.cols() == 0) return Subspace::full(n);
  const Matrix projected = complement.transpose() * M;
  const double nrm = norm2(M);
  if (nrm == 0.0) return Subspace::full(n);
  return kernel_abs(projected, tol * nrm);
}

double largest_principal_angle(const Subspace& U, const Subspace& W) {
  require_same_ambient(U, W, "largest_principal_angle");
  if (U.dim() != W.dim()) return 1.0;
  if (U.dim() == 0) return 0.0;
  const Matrix residual = W.basis() - U.basis() * (U.basis().transpose() * W.basis());
  return std::min(1.0, norm2(residual));
}

bool equal(const Subspace& U, const Subspace& W) {
  require_same_ambient(U, W, "equal");
  if (U.dim() != W.dim()) return false;
  const Subspace u(U.basis(), kSubspaceAngleTol);
  const Subspace w(W.basis(), kSubspaceAngleTol);
  return u.contains(w) && w.contains(u);
}

}  // namespace daelti
