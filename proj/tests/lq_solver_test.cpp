#include "daelti/associate.hpp"
#include "daelti/errors.hpp"
#include "daelti/lq_solver.hpp"

#include <gtest/gtest.h>

#include "test_support.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <numbers>

using namespace daelti;
namespace dt = daelti::testing;
using dt::Gen;

namespace {

Matrix scalar(double v) { return Matrix::Constant(1, 1, v); }

/// Fine RK4 for the scalar Riccati equation p' = 1 + 2 p - p^2.
double scalar_riccati(double p0, double t1) {
  const int steps = 100000;
  const double h = t1 / steps;
  auto f = [](double p) { return 1.0 + 2.0 * p - p * p; };
  double p = p0;
  for (int i = 0; i < steps; ++i) {
    const double k1 = f(p);
    const double k2 = f(p + 0.5 * h * k1);
    const double k3 = f(p + 0.5 * h * k2);
    const double k4 = f(p + h * k3);
    p += h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
  }
  return p;
}

LqWeights three_variable_weights() { return LqWeights(Matrix::Identity(3, 3), scalar(1.0), Matrix::Identity(2, 2)); }

/// Consistent initial value E C_s v for a random v.
Vector consistent_z(Gen& g, const DaeLti& dae, const AssociatedOdeLti& a) {
  return dae.E() * a.C_s() * g.vector(a.states());
}

}  // namespace

TEST(LqWeights, Validation) {
  EXPECT_NO_THROW(LqWeights(Matrix::Identity(2, 2), scalar(1.0), Matrix::Zero(1, 1)));
  Matrix Q(2, 2);
  Q << 1, 0.5, 0, 1;
  EXPECT_THROW(LqWeights(Q, scalar(1.0), Matrix::Zero(1, 1)), ShapeError);
  EXPECT_THROW(LqWeights(Matrix::Identity(2, 2), scalar(0.0), Matrix::Zero(1, 1)), ShapeError);
  EXPECT_THROW(LqWeights(Matrix::Identity(2, 2), scalar(1.0), scalar(-1.0)), ShapeError);
  EXPECT_THROW(LqWeights(Matrix::Identity(2, 3), scalar(1.0), scalar(0.0)), ShapeError);
  const LqWeights w = LqWeights::identity(3, 2, 1);
  EXPECT_EQ(w.S().rows(), 5);
  EXPECT_EQ(w.Q0().rows(), 1);
}

TEST(FiniteHorizon, TanhSolution) {
  // x' = u with unit weights: optimal cost tanh(t1) x0^2.
  const DaeLti dae(scalar(1.0), scalar(0.0), scalar(1.0));
  const AssociatedOdeLti a = associate(dae);
  const LqWeights w(scalar(1.0), scalar(1.0), scalar(0.0));
  for (double t1 : {0.5, 1.0, 3.0}) {
    const FiniteHorizonSolution s = finite_horizon(dae, a, w, scalar(1.0).col(0), t1);
    EXPECT_NEAR(s.cost, std::tanh(t1), 1e-8);
  }
}

TEST(FiniteHorizon, AutonomousSystemUsesLyapunovFlow) {
  // x' = -x, cost = (1 - e^{-2 t1}) / 2 + q0 e^{-2 t1}.
  const DaeLti dae(scalar(1.0), scalar(-1.0), Matrix::Zero(1, 0));
  const AssociatedOdeLti a = associate(dae);
  ASSERT_TRUE(a.zero_feedthrough());
  const LqWeights w(scalar(1.0), Matrix::Zero(0, 0), scalar(0.7));
  const FiniteHorizonSolution s = finite_horizon(dae, a, w, scalar(1.0).col(0), 2.0);
  const double decay = std::exp(-4.0);
  EXPECT_NEAR(s.cost, 0.5 * (1.0 - decay) + 0.7 * decay, 1e-9);
}

TEST(FiniteHorizon, ZeroInitialValue) {
  const DaeLti dae = dt::three_variable();
  const FiniteHorizonSolution s = finite_horizon(dae, associate(dae), three_variable_weights(), Vector::Zero(2), 1.0);
  EXPECT_EQ(s.cost, 0.0);
  EXPECT_EQ(s.traj.x.cwiseAbs().maxCoeff(), 0.0);
  EXPECT_EQ(s.traj.u.cwiseAbs().maxCoeff(), 0.0);
}

TEST(FiniteHorizon, ThreeVariableCost) {
  const DaeLti dae = dt::three_variable();
  const AssociatedOdeLti a = associate(dae);
  const LqWeights w = three_variable_weights();
  const FiniteHorizonSolution s = finite_horizon(dae, a, w, Vector::Ones(2), 1.0);
  // Both decoupled channels obey p' = 1 + 2p - p^2 from p(0) = 1.
  EXPECT_NEAR(s.cost, 2.0 * scalar_riccati(1.0, 1.0), 1e-8);
  EXPECT_NEAR(s.cost, 4.51273, 1e-5);
  EXPECT_NEAR(trajectory_cost(w, dae.E(), s.traj, true), s.cost, 1e-5 * s.cost);
}

TEST(FiniteHorizon, InputIsStateFeedback) {
  const DaeLti dae = dt::three_variable();
  const FiniteHorizonSolution s = finite_horizon(dae, associate(dae), three_variable_weights(), Vector::Ones(2), 1.0);
  double err = 0.0;
  double con = 0.0;
  for (Index i = 0; i < s.traj.size(); ++i) {
    err = std::max(err, (s.traj.u.col(i) - s.K_f[i] * s.traj.x.col(i)).cwiseAbs().maxCoeff());
    con = std::max(con, (s.K1[i] * s.traj.x.col(i) + s.K2 * s.traj.u.col(i)).cwiseAbs().maxCoeff());
  }
  EXPECT_LE(err, 1e-8);
  EXPECT_LE(con, 1e-8);
  EXPECT_LE(behavior_residual(dae, s.traj), 1e-5);
}

TEST(FiniteHorizon, RejectsInconsistentValue) {
  Matrix E(2, 2);
  E << 1, 0, 0, 0;
  const DaeLti dae(E, Matrix::Identity(2, 2), Matrix::Zero(2, 1));
  const LqWeights w = LqWeights::identity(2, 1, 2);
  EXPECT_THROW(finite_horizon(dae, associate(dae), w, Vector::Unit(2, 1), 1.0), InconsistentInitialState);
}

TEST(FiniteHorizon, RandomCostMatchesQuadrature) {
  Gen g(61);
  for (int t = 0; t < 20; ++t) {
    const DaeLti dae = g.dae();
    const AssociatedOdeLti a = associate(dae);
    if (a.states() == 0) continue;
    const LqWeights w = LqWeights::identity(dae.n(), dae.m(), dae.c());
    const Vector z = consistent_z(g, dae, a);
    const FiniteHorizonSolution s = finite_horizon(dae, a, w, z, 0.5);
    EXPECT_NEAR(trajectory_cost(w, dae.E(), s.traj, true), s.cost, 1e-5 * (1.0 + s.cost)) << "case " << t;
    EXPECT_LE(behavior_residual(dae, s.traj), 1e-5) << "case " << t;
  }
}

TEST(Dre, MonotoneWithoutTerminalWeight) {
  Gen g(62);
  for (int t = 0; t < 20; ++t) {
    const DaeLti dae = g.dae();
    const AssociatedOdeLti a = associate(dae);
    if (a.states() == 0) continue;
    const LqWeights w = LqWeights::identity(dae.n(), dae.m(), dae.c());
    const DreSolution d = solve_dre(dae, a, w, 1.0, 500);
    for (std::size_t i = 0; i + 1 < d.P.size(); i += 50) {
      Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrize(d.P[i + 1] - d.P[i]));
      EXPECT_GE(es.eigenvalues().minCoeff(), -1e-12) << "case " << t << " node " << i;
    }
  }
}

TEST(Dre, RejectsBadHorizon) {
  const DaeLti dae = dt::three_variable();
  EXPECT_THROW(solve_dre(dae, associate(dae), three_variable_weights(), -1.0, 10), Error);
}

TEST(Are, ThreeVariableClosedForm) {
  const DaeLti dae = dt::three_variable();
  const AssociatedOdeLti a = associate(dae);
  const AreSolution s = solve_are(stabilizable_restriction(a), three_variable_weights());
  EXPECT_LE(s.residual, 1e-12);
  EXPECT_NEAR(s.closed_loop_abscissa, -std::numbers::sqrt2, 1e-12);
}

TEST(Are, RandomInstances) {
  Gen g(63);
  int solved = 0;
  for (int t = 0; t < 100; ++t) {
    const DaeLti dae = g.dae();
    const AssociatedOdeLti a = associate(dae);
    const StabilizableRestriction r = stabilizable_restriction(a);
    if (r.l == 0) continue;
    const LqWeights w = LqWeights::identity(dae.n(), dae.m(), dae.c());
    const AreSolution s = solve_are(r, w);
    EXPECT_LE(are_residual(r.sys_g, w, s.P), 1e-8 * (1.0 + norm2(s.P))) << "case " << t;
    Eigen::SelfAdjointEigenSolver<Matrix> es(s.P);
    EXPECT_GT(es.eigenvalues().minCoeff(), 0.0) << "case " << t;
    EXPECT_LT(s.closed_loop_abscissa, 0.0) << "case " << t;
    ++solved;
  }
  EXPECT_GT(solved, 50);
}

TEST(InfiniteHorizon, UnstableScalarIsNotStabilizable) {
  const DaeLti dae(scalar(1.0), scalar(1.0), Matrix::Zero(1, 1));
  const AssociatedOdeLti a = associate(dae);
  const LqWeights w = LqWeights::identity(1, 1, 1);
  EXPECT_THROW(infinite_horizon(dae, a, w, Vector::Ones(1)), NotStabilizable);
  EXPECT_FALSE(is_behaviorally_stabilizable(dae, a, Vector::Ones(1)));
  EXPECT_TRUE(is_behaviorally_stabilizable(dae, a, Vector::Zero(1)));
}

TEST(InfiniteHorizon, ZeroInitialValue) {
  const DaeLti dae = dt::three_variable();
  const InfiniteHorizonSolution s = infinite_horizon(dae, associate(dae), three_variable_weights(), Vector::Zero(2));
  EXPECT_EQ(s.cost, 0.0);
}

TEST(InfiniteHorizon, ThreeVariableCost) {
  const DaeLti dae = dt::three_variable();
  const AssociatedOdeLti a = associate(dae);
  const LqWeights w = three_variable_weights();
  const InfiniteHorizonSolution s = infinite_horizon(dae, a, w, Vector::Ones(2));
  EXPECT_NEAR(s.cost, 2.0 + 2.0 * std::numbers::sqrt2, 1e-10);
  EXPECT_NEAR(trajectory_cost(w, dae.E(), s.traj, false), s.cost, 1e-4 * s.cost);
  EXPECT_LE((s.traj.u - s.K_f * s.traj.x).cwiseAbs().maxCoeff(), 1e-8);
  EXPECT_LE((s.K1 * s.traj.x + s.K2 * s.traj.u).cwiseAbs().maxCoeff(), 1e-8);
}

TEST(InfiniteHorizon, RandomCostMatchesQuadrature) {
  Gen g(64);
  int checked = 0;
  for (int t = 0; t < 30; ++t) {
    const DaeLti dae = g.dae();
    const AssociatedOdeLti a = associate(dae);
    if (a.states() == 0 || !pencil_stabilizability_test(dae, a)) continue;
    const LqWeights w = LqWeights::identity(dae.n(), dae.m(), dae.c());
    const Vector z = consistent_z(g, dae, a);
    const InfiniteHorizonSolution s = infinite_horizon(dae, a, w, z);
    EXPECT_NEAR(trajectory_cost(w, dae.E(), s.traj, false), s.cost, 1e-4 * (1.0 + s.cost)) << "case " << t;
    const Vector cum = cumulative_cost(w, s.traj);
    for (Index i = 1; i < cum.size(); ++i) EXPECT_GE(cum(i), cum(i - 1));
    ++checked;
  }
  EXPECT_GT(checked, 5);
}

TEST(InfiniteHorizon, SolvabilityMatchesHiddenMode) {
  Gen g(65);
  for (int t = 0; t < 40; ++t) {
    const dt::HiddenModeDae h = dt::hidden_unstable_mode(g);
    const AssociatedOdeLti a = associate(h.dae);
    const LqWeights w = LqWeights::identity(h.dae.n(), h.dae.m(), h.dae.c());
    Vector y = h.W.lu().solve(consistent_z(g, h.dae, a));
    const Index last = h.dae.c() - 1;
    const bool hidden_excited = std::abs(y(last)) > 1e-6;
    EXPECT_EQ(is_behaviorally_stabilizable(h.dae, a, h.W * y), !hidden_excited) << "case " << t;
    if (hidden_excited) EXPECT_THROW(infinite_horizon(h.dae, a, w, h.W * y), NotStabilizable);
    y(last) = 0.0;
    const Vector z0 = h.W * y;
    EXPECT_TRUE(is_behaviorally_stabilizable(h.dae, a, z0)) << "case " << t;
    EXPECT_NO_THROW(infinite_horizon(h.dae, a, w, z0));
  }
}

TEST(InfiniteHorizon, PencilTestImpliesSolvability) {
  Gen g(66);
  for (int t = 0; t < 50; ++t) {
    const DaeLti dae = g.dae();
    const AssociatedOdeLti a = associate(dae);
    if (!pencil_stabilizability_test(dae, a)) continue;
    EXPECT_TRUE(is_behaviorally_stabilizable(dae, a, consistent_z(g, dae, a))) << "case " << t;
  }
}

TEST(ClosedLoopReplay, InfiniteHorizonMatches) {
  const DaeLti dae = dt::three_variable();
  const InfiniteHorizonSolution s = infinite_horizon(dae, associate(dae), three_variable_weights(), Vector::Ones(2));
  const Trajectory r = closed_loop_replay(dae, s.K1, s.K2, Vector::Ones(2), s.traj.times);
  EXPECT_LE((r.x - s.traj.x).cwiseAbs().maxCoeff(), 1e-8);
  EXPECT_LE((r.u - s.traj.u).cwiseAbs().maxCoeff(), 1e-8);
}

TEST(ClosedLoopReplay, FiniteHorizonMatches) {
  const DaeLti dae = dt::three_variable();
  const AssociatedOdeLti a = associate(dae);
  const FiniteHorizonSolution s = finite_horizon(dae, a, three_variable_weights(), Vector::Ones(2), 1.0);
  const Trajectory r = closed_loop_replay(dae, a, s, Vector::Ones(2));
  EXPECT_LE((r.x - s.traj.x).cwiseAbs().maxCoeff(), 1e-8);
  EXPECT_LE((r.u - s.traj.u).cwiseAbs().maxCoeff(), 1e-8);
}

TEST(ClosedLoopReplay, NonUniqueConstraintIsRejected) {
  const DaeLti dae = dt::three_variable();
  // K1 = 0, K2 = 0 leaves the free variables unconstrained.
  EXPECT_THROW(closed_loop_replay(dae, Matrix::Zero(4, 3), Matrix::Zero(4, 1), Vector::Ones(2),
                                  uniform_grid(0.0, 1.0, 10)),
               ConstraintViolated);
}

TEST(TrajectoryCost, Examples) {
  const LqWeights w(scalar(2.0), scalar(1.0), scalar(3.0));
  const Trajectory traj{uniform_grid(0.0, 2.0, 7), Matrix::Ones(1, 8), Matrix::Zero(1, 8)};
  EXPECT_NEAR(trajectory_cost(w, scalar(1.0), traj, false), 4.0, 1e-14);
  EXPECT_NEAR(trajectory_cost(w, scalar(1.0), traj, true), 7.0, 1e-14);
  Trajectory ramp{uniform_grid(0.0, 1.0, 10), Matrix::Zero(1, 11), Matrix(1, 11)};
  for (Index j = 0; j < 11; ++j) ramp.u(0, j) = ramp.times(j);
  EXPECT_NEAR(trajectory_cost(w, scalar(1.0), ramp, false), 1.0 / 3.0, 1e-14);
  const Vector cum = cumulative_cost(w, traj);
  EXPECT_DOUBLE_EQ(cum(0), 0.0);
  EXPECT_NEAR(cum(7), 4.0, 1e-14);
}
