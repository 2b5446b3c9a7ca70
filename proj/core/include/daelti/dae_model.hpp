#pragma once

#include "daelti/linalg.hpp"
#include "daelti/subspace.hpp"
#include "daelti/trajectory.hpp"

#include <complex>
#include <cstdint>

namespace daelti {

struct AssociatedOdeLti;

/// The descriptor system d(Ex)/dt = A x + B u with E, A of size c x n and
/// B of size c x m.
class DaeLti {
 public:
  DaeLti(Matrix E, Matrix A, Matrix B);

  const Matrix& E() const { return E_; }
  const Matrix& A() const { return A_; }
  const Matrix& B() const { return B_; }
  Index c() const { return E_.rows(); }
  Index n() const { return E_.cols(); }
  Index m() const { return B_.cols(); }

  /// Largest spectral norm among E, A, B (1 if all are zero). Geometric
  /// tolerances are multiplied by this value.
  double scale() const { return scale_; }

 private:
  Matrix E_;
  Matrix A_;
  Matrix B_;
  double scale_ = 1.0;
};

/// Limit of V_0 = R^n, V_{i+1} = A^{-1}(E V_i + im B).
Subspace wong_limit(const DaeLti& dae, double tol = kGeometryTol);

/// im(E C_s): the initial values Ex(0) reachable by some solution.
Subspace consistency_space(const DaeLti& dae, const AssociatedOdeLti& assoc, double tol = kGeometryTol);

bool is_consistent(const DaeLti& dae, const AssociatedOdeLti& assoc, const Vector& z, double tol = kGeometryTol);

/// rank[E, A, B] == rank[E, A Z, B] with im Z = ker E.
bool impulse_controllable(const DaeLti& dae, double tol = kGeometryTol);

/// True iff the associated pair (A_l, B_l) is stabilizable.
bool pencil_stabilizability_test(const DaeLti& dae, const AssociatedOdeLti& assoc, double tol = kGeometryTol);

/// Rank of [lambda E - A, B].
Index pencil_rank(const DaeLti& dae, std::complex<double> lambda, double tol = kGeometryTol);

/// Normal rank of [sE - A, B], estimated as the maximum rank over a few
/// random complex points drawn from `seed`.
Index pencil_normal_rank(const DaeLti& dae, std::uint64_t seed = 1, double tol = kGeometryTol);

/// Independent check of stabilizability: for every eigenvalue of A_l with
/// Re >= -1e-9 the pencil [lambda E - A, B] keeps its normal rank.
bool pencil_rank_probe(const DaeLti& dae, const AssociatedOdeLti& assoc, double tol = kGeometryTol);

/// Max over interior nodes of |d(Ex)/dt - Ax - Bu|_inf with d/dt by central
/// differences, divided by 1 + max |(x, u)|_inf. Requires >= 3 nodes.
double behavior_residual(const DaeLti& dae, const Trajectory& traj);

}  // namespace daelti
