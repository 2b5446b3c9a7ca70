#include "daelti/dae_model.hpp"

#include "daelti/associate.hpp"
#include "daelti/errors.hpp"
#include "daelti/ode_geometry.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <random>

namespace daelti {

DaeLti::DaeLti(Matrix E, Matrix A, Matrix B) : E_(std::move(E)), A_(std::move(A)), B_(std::move(B)) {
  require_shape(A_, E_.rows(), E_.cols(), "DAE A");
  require_shape(B_, E_.rows(), B_.cols(), "DAE B");
  require_finite(E_, "DAE E");
  require_finite(A_, "DAE A");
  require_finite(B_, "DAE B");
  scale_ = std::max({norm2(E_), norm2(A_), norm2(B_)});
  if (!(scale_ > 0.0)) scale_ = 1.0;
}

Subspace wong_limit(const DaeLti& dae, double tol) {
  const Index n = dae.n();
  const double thr = tol * dae.scale();
  const Subspace imB = image_abs(dae.B(), thr);
  Subspace V = Subspace::full(n);
  for (Index it = 0; it <= n; ++it) {
    const Subspace target = sum(image_abs(dae.E() * V.basis(), thr), imB);
    const Subspace next = intersect(preimage(dae.A(), target, tol), V);
    if (next.dim() == V.dim()) return next;
    V = next;
  }
  return V;
}

Subspace consistency_space(const DaeLti& dae, const AssociatedOdeLti& assoc, double tol) {
  const Matrix Cs = assoc.C_s();
  if (Cs.rows() != dae.n()) throw ShapeError("consistency_space: realization does not match the DAE");
  return image_abs(dae.E() * Cs, tol * dae.scale() * std::max(1.0, norm2(Cs)));
}

bool is_consistent(const DaeLti& dae, const AssociatedOdeLti& assoc, const Vector& z, double tol) {
  if (z.size() != dae.c()) throw ShapeError("is_consistent: z has wrong dimension");
  return consistency_space(dae, assoc, tol).contains(z);
}

bool impulse_controllable(const DaeLti& dae, double tol) {
  const double thr = tol * dae.scale();
  const Subspace kerE = kernel_abs(dae.E(), thr);
  const Matrix Z = kerE.dim() > 0 ? kerE.basis() : Matrix(Matrix::Zero(dae.n(), 1));
  const Index c = dae.c();
  Matrix full(c, dae.n() + dae.n() + dae.m());
  full << dae.E(), dae.A(), dae.B();
  Matrix reduced(c, dae.n() + Z.cols() + dae.m());
  reduced << dae.E(), dae.A() * Z, dae.B();
  return rank_abs(full, thr) == rank_abs(reduced, thr);
}

bool pencil_stabilizability_test(const DaeLti& dae, const AssociatedOdeLti& assoc, double tol) {
  if (assoc.n != dae.n() || assoc.m != dae.m()) throw ShapeError("pencil_stabilizability_test: shape mismatch");
  const Matrix B = assoc.zero_feedthrough() ? Matrix(Matrix::Zero(assoc.states(), 1)) : assoc.B_l;
  return stabilizability_subspace(assoc.A_l, B, tol).dim() == assoc.states();
}

Index pencil_rank(const DaeLti& dae, std::complex<double> lambda, double tol) {
  using CM = Eigen::MatrixXcd;
  const Index c = dae.c();
  if (c == 0) return 0;
  CM P(c, dae.n() + dae.m());
  P << lambda * dae.E().cast<std::complex<double>>() - dae.A().cast<std::complex<double>>(),
      dae.B().cast<std::complex<double>>();
  if (P.cols() == 0) return 0;
  Eigen::JacobiSVD<CM> svd(P);
  const double thr = tol * dae.scale() * std::max(1.0, std::abs(lambda));
  return (svd.singularValues().array() > thr).count();
}

Index pencil_normal_rank(const DaeLti& dae, std::uint64_t seed, double tol) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd(0.0, 1.0);
  Index best = 0;
  for (int i = 0; i < 4; ++i) best = std::max(best, pencil_rank(dae, {nd(rng), nd(rng)}, tol));
  return best;
}

bool pencil_rank_probe(const DaeLti& dae, const AssociatedOdeLti& assoc, double tol) {
  if (assoc.states() == 0) return true;
  const Index nrank = pencil_normal_rank(dae, 1, tol);
  Eigen::EigenSolver<Matrix> es(assoc.A_l, false);
  for (Index i = 0; i < es.eigenvalues().size(); ++i) {
    const std::complex<double> l = es.eigenvalues()(i);
    if (l.real() >= -1e-9 && pencil_rank(dae, l, tol) < nrank) return false;
  }
  return true;
}

double behavior_residual(const DaeLti& dae, const Trajectory& traj) {
  traj.validate();
  if (traj.size() < 3) throw GridError("behavior_residual: need at least three nodes");
  if (traj.x.rows() != dae.n() || traj.u.rows() != dae.m()) throw ShapeError("behavior_residual: trajectory shape");
  const Matrix Ex = dae.E() * traj.x;
  const Matrix rhs = dae.A() * traj.x + dae.B() * traj.u;
  double sup = 0.0;
  if (traj.x.size() > 0) sup = traj.x.cwiseAbs().maxCoeff();
  if (traj.u.size() > 0) sup = std::max(sup, traj.u.cwiseAbs().maxCoeff());
  double worst = 0.0;
  for (Index i = 1; i + 1 < traj.size(); ++i) {
    const double h1 = traj.times(i) - traj.times(i - 1);
    const double h2 = traj.times(i + 1) - traj.times(i);
    const Vector d = (-h2 / (h1 * (h1 + h2))) * Ex.col(i - 1) + ((h2 - h1) / (h1 * h2)) * Ex.col(i) +
                     (h1 / (h2 * (h1 + h2))) * Ex.col(i + 1);
    if (d.size() > 0) worst = std::max(worst, (d - rhs.col(i)).cwiseAbs().maxCoeff());
  }
  return worst / (1.0 + sup);
}

}  // namespace daelti
