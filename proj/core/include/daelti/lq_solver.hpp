#pragma once

#include "daelti/associate.hpp"
#include "daelti/dae_model.hpp"
#include "daelti/linalg.hpp"
#include "daelti/trajectory.hpp"

#include <optional>
#include <vector>

namespace daelti {

/// Cost weights: integrand x^T Q x + u^T R u, terminal x^T E^T Q0 E x.
class LqWeights {
 public:
  /// Throws ShapeError unless Q, R are symmetric positive definite and Q0
  /// symmetric positive semidefinite (symmetry to 1e-12, eigenvalues > 0 and
  /// >= -1e-12 respectively).
  LqWeights(Matrix Q, Matrix R, Matrix Q0);

  /// Q = I_n, R = I_m, Q0 = 0.
  static LqWeights identity(Index n, Index m, Index c);

  const Matrix& Q() const { return Q_; }
  const Matrix& R() const { return R_; }
  const Matrix& Q0() const { return Q0_; }
  /// diag(Q, R).
  Matrix S() const { return blkdiag(Q_, R_); }

 private:
  Matrix Q_;
  Matrix R_;
  Matrix Q0_;
};

/// max(2000, ceil(1000 * t1)).
Index default_dre_steps(double t1);

/// P and K at the DRE nodes times(i), i = 0..steps.
struct DreSolution {
  Vector times;
  std::vector<Matrix> P;
  std::vector<Matrix> K;
};

/// RK4 integration of
///   P' = A_l^T P + P A_l - K^T (D^T S D) K + C_l^T S C_l,
///   P(0) = (E C_s)^T Q0 (E C_s),
/// with K = (D^T S D)^{-1}(B^T P + D^T S C), or K = 0 when D_l = 0.
/// Throws NonFiniteP if P blows up.
DreSolution solve_dre(const DaeLti& dae, const AssociatedOdeLti& assoc, const LqWeights& w, double t1, Index steps);

struct FiniteHorizonSolution {
  Vector times;               // grid on [0, t1]
  std::vector<Matrix> P;      // P(times(i))
  std::vector<Matrix> K;      // K(times(i))
  Trajectory traj;            // optimal (x*, u*)
  std::vector<Matrix> K_f;    // u*(s) = K_f(s) x*(s)
  std::vector<Matrix> K1;     // K1(s) x*(s) + K2 u*(s) = 0
  Matrix K2;
  Vector v0;                  // M z
  double cost = 0.0;          // v0^T P(t1) v0
};

/// Throws InconsistentInitialState when z is not in im(E C_s).
FiniteHorizonSolution finite_horizon(const DaeLti& dae, const AssociatedOdeLti& assoc, const LqWeights& w,
                                     const Vector& z, double t1, std::optional<Index> steps = std::nullopt);

struct AreSolution {
  Matrix P;
  Matrix K;
  double residual = 0.0;
  double closed_loop_abscissa = 0.0;
};

/// Stabilizing solution of
///   0 = P A + A^T P - K^T (D^T S D) K + C^T S C,  K = (D^T S D)^{-1}(B^T P + D^T S C)
/// on the restricted system. With D = 0 the gain is the 1 x l zero matrix
/// and P solves the Lyapunov equation.
AreSolution solve_are(const StabilizableRestriction& restr, const LqWeights& w);

/// Residual of the equation above (max-abs entry).
double are_residual(const OdeLti& sys, const LqWeights& w, const Matrix& P);

/// Membership of M z in the stabilizability subspace of (A_l, B_l).
/// Throws InconsistentInitialState when z is not consistent.
bool is_behaviorally_stabilizable(const DaeLti& dae, const AssociatedOdeLti& assoc, const Vector& z,
                                  double tol = kGeometryTol);

struct InfiniteHorizonOptions {
  /// Simulation horizon; default 50 / |closed-loop abscissa| capped at 1e4.
  std::optional<double> T_sim;
  /// Number of grid steps; default keeps h * spectral radius <= 0.2,
  /// clamped to [2000, 200000].
  std::optional<Index> steps;
  double tol = kGeometryTol;
};

struct InfiniteHorizonSolution {
  Matrix P;
  Matrix K;
  Matrix K_f;
  Matrix K1;
  Matrix K2;
  Trajectory traj;
  double cost = 0.0;
  double closed_loop_abscissa = 0.0;
  double are_residual = 0.0;
  StabilizableRestriction restriction;
  Vector v0;  // M_g z
};

/// Throws InconsistentInitialState or NotStabilizable.
InfiniteHorizonSolution infinite_horizon(const DaeLti& dae, const AssociatedOdeLti& assoc, const LqWeights& w,
                                         const Vector& z, const InfiniteHorizonOptions& options = {});

/// Composite Simpson integral of x^T Q x + u^T R u on a uniform grid (3/8
/// rule on the last three intervals for odd interval counts), plus the
/// terminal term x(t_end)^T E^T Q0 E x(t_end) when requested.
double trajectory_cost(const LqWeights& w, const Matrix& E, const Trajectory& traj, bool terminal);

/// Running integral of the cost at every grid node (trapezoidal).
Vector cumulative_cost(const LqWeights& w, const Trajectory& traj);

/// Replays the unique solution of d(Ex)/dt = Ax + Bu, K1 x + K2 u = 0 with
/// Ex(0) = z. The constrained system is realized independently with
/// associate() and propagated on `grid`. Throws ConstraintViolated when the
/// solution is not unique or |K1 x + K2 u|_inf > 1e-6 (1 + |(x, u)|_inf).
Trajectory closed_loop_replay(const DaeLti& dae, const Matrix& K1, const Matrix& K2, const Vector& z,
                              const Vector& grid, double tol = kGeometryTol);

/// Finite-horizon analogue: integrates v' = (A_l - B_l K(t1 - s)) v from M z
/// and checks K1(s) x + K2 u = 0 at every node.
Trajectory closed_loop_replay(const DaeLti& dae, const AssociatedOdeLti& assoc, const FiniteHorizonSolution& sol,
                              const Vector& z);

}  // namespace daelti
