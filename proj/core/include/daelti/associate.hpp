#pragma once

#include "daelti/dae_model.hpp"
#include "daelti/linalg.hpp"
#include "daelti/ode_geometry.hpp"
#include "daelti/subspace.hpp"
#include "daelti/trajectory.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace daelti {

/// ODE realization v' = A_l v + B_l g, (x; u) = C_l v + D_l g of a DAE
/// behavior, with state map M sending Ex to v.
struct AssociatedOdeLti {
  Matrix A_l;
  Matrix B_l;
  Matrix C_l;
  Matrix D_l;
  Matrix M;
  Index n = 0;  // dimension of x
  Index m = 0;  // dimension of u

  Index states() const { return A_l.rows(); }
  Index inputs() const { return B_l.cols(); }
  Matrix C_s() const { return C_l.topRows(n); }
  Matrix D_s() const { return D_l.topRows(n); }
  Matrix C_u() const { return C_l.bottomRows(m); }
  Matrix D_u() const { return D_l.bottomRows(m); }
  OdeLti system() const { return OdeLti(A_l, B_l, C_l, D_l); }

  /// True for the degenerate realization B_l = 0, D_l = 0 with one dummy input.
  bool zero_feedthrough() const;
};

struct AssociateOptions {
  double tol = kGeometryTol;
  /// When set, the bases of the weakly unobservable subspace and of the
  /// input space are rotated by random orthogonal matrices from this seed.
  std::optional<std::uint64_t> basis_seed;
};

AssociatedOdeLti associate(const DaeLti& dae, const AssociateOptions& options);
AssociatedOdeLti associate(const DaeLti& dae, double tol = kGeometryTol);

struct VerificationReport {
  bool shapes = true;
  bool feedthrough_rank = true;  // D_l full column rank, or B_l = D_l = 0 with k = 1
  bool ed_s_zero = true;
  bool ec_s_rank = true;
  bool state_map = true;  // M E C_s = I
  bool dimension_bound = true;  // n_hat <= rank E
  bool behavior = true;
  double max_behavior_residual = 0.0;
  std::vector<std::string> failures;

  bool ok() const { return failures.empty(); }
};

/// Checks the defining rank conditions and runs `simulations` random
/// lifted trajectories through behavior_residual (threshold 1e-5).
VerificationReport verify_associated(const DaeLti& dae, const AssociatedOdeLti& sys, double tol = kGeometryTol,
                                     std::uint64_t seed = 0, int simulations = 20);

struct ProjectedSolution {
  Matrix v;  // n_hat x N
  Matrix g;  // k x N
};

/// v = M E x and g = D_l^+((x; u) - C_l v), sample by sample.
ProjectedSolution project_solution(const DaeLti& dae, const AssociatedOdeLti& assoc, const Trajectory& traj);

/// Simulates the realization from v0 with the given inputs and splits the
/// output into (x, u).
Trajectory lift_solution(const DaeLti& dae, const AssociatedOdeLti& assoc, const Vector& v0, const Matrix& g,
                         const Vector& grid);

/// (T, K, U) with A2 = T(A1 + B1 K)T^{-1}, B2 = T B1 U, C2 = (C1 + D1 K)T^{-1},
/// D2 = D1 U.
struct FeedbackTransform {
  Matrix T;
  Matrix K;
  Matrix U;
  double residual = 0.0;  // largest relative identity residual
};

/// Applies a feedback transformation; the state map becomes T M.
AssociatedOdeLti apply_feedback(const AssociatedOdeLti& s, const FeedbackTransform& f);

/// Recovers the transformation relating two realizations of the same DAE.
/// Throws NotEquivalent when a residual exceeds tol or T, U are singular.
FeedbackTransform feedback_equivalence(const AssociatedOdeLti& s1, const AssociatedOdeLti& s2, const DaeLti& dae,
                                       double tol = 1e-8);

std::optional<FeedbackTransform> try_feedback_equivalence(const AssociatedOdeLti& s1, const AssociatedOdeLti& s2,
                                                          const DaeLti& dae, double tol = 1e-8);

/// Restriction of a realization to its stabilizability subspace V_g.
struct StabilizableRestriction {
  OdeLti sys_g;
  Matrix M_g;  // l x c
  Matrix Pi;   // l x n_hat, orthonormal rows spanning V_g
  Index l = 0;
  Subspace V_g;
};

StabilizableRestriction stabilizable_restriction(const AssociatedOdeLti& assoc, double tol = kGeometryTol);

}  // namespace daelti
