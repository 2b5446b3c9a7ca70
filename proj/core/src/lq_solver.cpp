#include "daelti/lq_solver.hpp"

#include "daelti/errors.hpp"
#include "daelti/ode_geometry.hpp"
#include "daelti/riccati.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>

namespace daelti {

namespace {

void require_symmetric(const Matrix& M, const char* name) {
  if (M.rows() != M.cols()) throw ShapeError(std::string(name) + " must be square");
  if (M.size() > 0 && (M - M.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, M.cwiseAbs().maxCoeff())) {
    throw ShapeError(std::string(name) + " must be symmetric");
  }
}

double min_eigenvalue(const Matrix& M) {
  if (M.rows() == 0) return std::numeric_limits<double>::infinity();
  Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrize(M), Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

void check_weights(const LqWeights& w, const DaeLti& dae) {
  require_shape(w.Q(), dae.n(), dae.n(), "Q");
  require_shape(w.R(), dae.m(), dae.m(), "R");
  require_shape(w.Q0(), dae.c(), dae.c(), "Q0");
}

// Quadratic-form data of the cost in realization coordinates.
struct CostForm {
  Matrix Rt;   // D^T S D
  Matrix N;    // C^T S D
  Matrix Qc;   // C^T S C
  bool zero_feedthrough = false;
};

CostForm cost_form(const Matrix& C, const Matrix& D, const Matrix& S, bool zero_feedthrough) {
  CostForm f;
  f.zero_feedthrough = zero_feedthrough;
  f.Qc = symmetrize(C.transpose() * S * C);
  f.Rt = symmetrize(D.transpose() * S * D);
  f.N = C.transpose() * S * D;
  return f;
}

Matrix gain(const CostForm& f, const Matrix& B, const Matrix& P) {
  if (f.zero_feedthrough) return Matrix::Zero(1, P.rows());
  return f.Rt.ldlt().solve(B.transpose() * P + f.N.transpose());
}

Matrix dre_rhs(const Matrix& A, const Matrix& B, const CostForm& f, const Matrix& P) {
  Matrix out = A.transpose() * P + P * A + f.Qc;
  if (!f.zero_feedthrough) {
    const Matrix K = gain(f, B, P);
    out.noalias() -= K.transpose() * f.Rt * K;
  }
  return out;
}

bool is_zero_feedthrough(const Matrix& B, const Matrix& D) {
  return B.cols() == 1 && B.isZero(0.0) && D.isZero(0.0);
}

Matrix output_selector(Index n, Index m, bool state_block) {
  Matrix Sel = Matrix::Zero(n + m, state_block ? n : m);
  if (state_block) {
    Sel.topRows(n) = Matrix::Identity(n, n);
  } else {
    Sel.bottomRows(m) = -Matrix::Identity(m, m);
  }
  return Sel;
}

}  // namespace

LqWeights::LqWeights(Matrix Q, Matrix R, Matrix Q0) : Q_(std::move(Q)), R_(std::move(R)), Q0_(std::move(Q0)) {
  require_finite(Q_, "Q");
  require_finite(R_, "R");
  require_finite(Q0_, "Q0");
  require_symmetric(Q_, "Q");
  require_symmetric(R_, "R");
  require_symmetric(Q0_, "Q0");
  if (!(min_eigenvalue(Q_) > 0.0)) throw ShapeError("Q must be positive definite");
  if (!(min_eigenvalue(R_) > 0.0)) throw ShapeError("R must be positive definite");
  if (!(min_eigenvalue(Q0_) >= -1e-12)) throw ShapeError("Q0 must be positive semidefinite");
}

LqWeights LqWeights::identity(Index n, Index m, Index c) {
  return LqWeights(Matrix::Identity(n, n), Matrix::Identity(m, m), Matrix::Zero(c, c));
}

Index default_dre_steps(double t1) {
  return std::max<Index>(2000, static_cast<Index>(std::ceil(1000.0 * t1)));
}

DreSolution solve_dre(const DaeLti& dae, const AssociatedOdeLti& assoc, const LqWeights& w, double t1, Index steps) {
  check_weights(w, dae);
  if (!(t1 > 0.0)) throw GridError("solve_dre: horizon must be positive");
  if (steps < 100) throw GridError("solve_dre: need at least 100 steps");
  const Matrix& A = assoc.A_l;
  const Matrix& B = assoc.B_l;
  const CostForm f = cost_form(assoc.C_l, assoc.D_l, w.S(), assoc.zero_feedthrough());
  const Matrix EC = dae.E() * assoc.C_s();

  DreSolution out;
  out.times = uniform_grid(0.0, t1, steps);
  const double h = t1 / static_cast<double>(steps);
  Matrix P = symmetrize(EC.transpose() * w.Q0() * EC);
  out.P.reserve(static_cast<std::size_t>(steps + 1));
  out.K.reserve(static_cast<std::size_t>(steps + 1));
  out.P.push_back(P);
  out.K.push_back(gain(f, B, P));
  for (Index i = 0; i < steps; ++i) {
    const Matrix k1 = dre_rhs(A, B, f, P);
    const Matrix k2 = dre_rhs(A, B, f, P + 0.5 * h * k1);
    const Matrix k3 = dre_rhs(A, B, f, P + 0.5 * h * k2);
    const Matrix k4 = dre_rhs(A, B, f, P + h * k3);
    P = symmetrize(P + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4));
    if (!P.allFinite()) throw NonFiniteP("solve_dre: Riccati solution is not finite");
    out.P.push_back(P);
    out.K.push_back(gain(f, B, P));
  }
  return out;
}

FiniteHorizonSolution finite_horizon(const DaeLti& dae, const AssociatedOdeLti& assoc, const LqWeights& w,
                                     const Vector& z, double t1, std::optional<Index> steps) {
  if (z.size() != dae.c()) throw ShapeError("finite_horizon: z has wrong dimension");
  if (!is_consistent(dae, assoc, z)) throw InconsistentInitialState("finite_horizon: z is not consistent");
  const Index N = steps.value_or(default_dre_steps(t1));
  const DreSolution dre = solve_dre(dae, assoc, w, t1, N);

  FiniteHorizonSolution sol;
  sol.times = dre.times;
  sol.P = dre.P;
  sol.K = dre.K;
  sol.v0 = assoc.M * z;
  sol.cost = sol.v0.dot(dre.P.back() * sol.v0);

  // v' = (A_l - B_l K(t1 - s)) v with the gain linear between nodes.
  const Index nh = assoc.states();
  const double h = t1 / static_cast<double>(N);
  Matrix V(nh, N + 1);
  V.col(0) = sol.v0;
  for (Index i = 0; i < N; ++i) {
    const Matrix& Ka = dre.K[static_cast<std::size_t>(N - i)];
    const Matrix& Kb = dre.K[static_cast<std::size_t>(N - i - 1)];
    const Matrix A0 = assoc.A_l - assoc.B_l * Ka;
    const Matrix Am = assoc.A_l - assoc.B_l * (0.5 * (Ka + Kb));
    const Matrix A1 = assoc.A_l - assoc.B_l * Kb;
    const Vector v = V.col(i);
    const Vector k1 = A0 * v;
    const Vector k2 = Am * (v + 0.5 * h * k1);
    const Vector k3 = Am * (v + 0.5 * h * k2);
    const Vector k4 = A1 * (v + h * k3);
    V.col(i + 1) = v + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }

  const Index n = dae.n();
  const Index m = dae.m();
  const Matrix ME = assoc.M * dae.E();
  const Matrix I0 = output_selector(n, m, true);
  sol.K2 = output_selector(n, m, false);
  sol.traj.times = sol.times;
  sol.traj.x.resize(n, N + 1);
  sol.traj.u.resize(m, N + 1);
  sol.K_f.reserve(static_cast<std::size_t>(N + 1));
  sol.K1.reserve(static_cast<std::size_t>(N + 1));
  for (Index i = 0; i <= N; ++i) {
    const Matrix& K = dre.K[static_cast<std::size_t>(N - i)];
    const Matrix CK = assoc.C_l - assoc.D_l * K;
    const Vector xu = CK * V.col(i);
    sol.traj.x.col(i) = xu.head(n);
    sol.traj.u.col(i) = xu.tail(m);
    sol.K_f.push_back(CK.bottomRows(m) * ME);
    sol.K1.push_back(CK * ME - I0);
  }
  return sol;
}

double are_residual(const OdeLti& sys, const LqWeights& w, const Matrix& P) {
  if (sys.states() == 0) return 0.0;
  const CostForm f = cost_form(sys.C(), sys.D(), w.S(), is_zero_feedthrough(sys.G(), sys.D()));
  return dre_rhs(sys.A(), sys.G(), f, P).cwiseAbs().maxCoeff();
}

AreSolution solve_are(const StabilizableRestriction& restr, const LqWeights& w) {
  const OdeLti& g = restr.sys_g;
  const Index l = g.states();
  const Matrix S = w.S();
  const bool zero = is_zero_feedthrough(g.G(), g.D());
  require_shape(S, g.outputs(), g.outputs(), "cost weight diag(Q, R)");
  const CostForm f = cost_form(g.C(), g.D(), S, zero);

  AreSolution out;
  if (zero) {
    out.P = l > 0 ? solve_lyapunov(g.A(), f.Qc) : Matrix(0, 0);
    out.K = Matrix::Zero(1, l);
  } else {
    // g = F_hat v + U w turns the cross-weighted problem into a standard one.
    Eigen::SelfAdjointEigenSolver<Matrix> es(f.Rt);
    if (!(es.eigenvalues().minCoeff() > 0.0)) throw ShapeError("solve_are: D^T S D is singular");
    const Matrix U = es.eigenvectors() * es.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() *
                     es.eigenvectors().transpose();
    const Matrix Fh = -f.Rt.ldlt().solve(f.N.transpose());
    const Matrix Ah = g.A() + g.G() * Fh;
    const Matrix Bh = g.G() * U;
    const Matrix CF = g.C() + g.D() * Fh;
    const Matrix Qh = symmetrize(CF.transpose() * S * CF);
    if (l == 0) {
      out.P = Matrix(0, 0);
      out.K = Matrix(g.inputs(), 0);
    } else {
      const Matrix K0 = hamiltonian_gain(Ah, Bh, Qh);
      const CareSolution care = newton_kleinman(Ah, Bh, Qh, K0);
      out.P = care.P;
      out.K = gain(f, g.G(), out.P);
    }
  }
  out.residual = are_residual(g, w, out.P);
  out.closed_loop_abscissa = l > 0 ? spectral_abscissa(g.A() - g.G() * out.K) : -std::numeric_limits<double>::infinity();
  return out;
}

bool is_behaviorally_stabilizable(const DaeLti& dae, const AssociatedOdeLti& assoc, const Vector& z, double tol) {
  if (z.size() != dae.c()) throw ShapeError("is_behaviorally_stabilizable: z has wrong dimension");
  if (!is_consistent(dae, assoc, z, tol)) throw InconsistentInitialState("z is not consistent");
  const Matrix B = assoc.zero_feedthrough() ? Matrix(Matrix::Zero(assoc.states(), 1)) : assoc.B_l;
  return stabilizability_subspace(assoc.A_l, B, tol).contains(Vector(assoc.M * z));
}

InfiniteHorizonSolution infinite_horizon(const DaeLti& dae, const AssociatedOdeLti& assoc, const LqWeights& w,
                                         const Vector& z, const InfiniteHorizonOptions& options) {
  check_weights(w, dae);
  if (z.size() != dae.c()) throw ShapeError("infinite_horizon: z has wrong dimension");
  if (!is_consistent(dae, assoc, z, options.tol)) throw InconsistentInitialState("infinite_horizon: z is not consistent");

  InfiniteHorizonSolution sol;
  sol.restriction = stabilizable_restriction(assoc, options.tol);
  const StabilizableRestriction& r = sol.restriction;
  if (!r.V_g.contains(Vector(assoc.M * z))) {
    throw NotStabilizable("infinite_horizon: the DAE is not behaviorally stabilizable from z");
  }
  const AreSolution are = solve_are(r, w);
  sol.P = are.P;
  sol.K = are.K;
  sol.are_residual = are.residual;
  sol.closed_loop_abscissa = are.closed_loop_abscissa;
  sol.v0 = r.M_g * z;
  sol.cost = r.l > 0 ? sol.v0.dot(sol.P * sol.v0) : 0.0;

  const Index n = dae.n();
  const Index m = dae.m();
  const OdeLti& g = r.sys_g;
  const Matrix ME = r.M_g * dae.E();
  const Matrix CK = g.C() - g.D() * sol.K;
  sol.K_f = CK.bottomRows(m) * ME;
  sol.K1 = CK * ME - output_selector(n, m, true);
  sol.K2 = output_selector(n, m, false);

  const Matrix Acl = g.A() - g.G() * sol.K;
  double T = 10.0;
  if (options.T_sim) {
    T = *options.T_sim;
  } else if (r.l > 0 && std::isfinite(sol.closed_loop_abscissa) && sol.closed_loop_abscissa < 0.0) {
    T = std::min(50.0 / std::abs(sol.closed_loop_abscissa), 1e4);
  }
  Index steps = 2000;
  if (options.steps) {
    steps = *options.steps;
  } else if (r.l > 0) {
    Eigen::EigenSolver<Matrix> es(Acl, false);
    const double rho = es.eigenvalues().cwiseAbs().maxCoeff();
    steps = std::clamp<Index>(static_cast<Index>(std::ceil(T * rho / 0.2)), 2000, 200000);
  }
  const Vector grid = uniform_grid(0.0, T, steps);
  const Simulation sim = propagate_free_response(OdeLti(Acl, Matrix::Zero(r.l, 0), CK, Matrix::Zero(n + m, 0)),
                                                 sol.v0, grid);
  sol.traj.times = grid;
  sol.traj.x = sim.outputs.topRows(n);
  sol.traj.u = sim.outputs.bottomRows(m);
  return sol;
}

double trajectory_cost(const LqWeights& w, const Matrix& E, const Trajectory& traj, bool terminal) {
  traj.validate();
  if (traj.size() < 2) throw GridError("trajectory_cost: need at least two nodes");
  const Index N = traj.size();
  const double h = uniform_step(traj.times);
  Vector f(N);
  for (Index i = 0; i < N; ++i) {
    f(i) = traj.x.col(i).dot(w.Q() * traj.x.col(i)) + traj.u.col(i).dot(w.R() * traj.u.col(i));
  }
  double total = simpson_integral(f, h);
  if (terminal) {
    const Vector Ex = E * traj.x.col(N - 1);
    total += Ex.dot(w.Q0() * Ex);
  }
  return total;
}

Vector cumulative_cost(const LqWeights& w, const Trajectory& traj) {
  traj.validate();
  const Index N = traj.size();
  Vector out = Vector::Zero(N);
  double prev = N > 0 ? traj.x.col(0).dot(w.Q() * traj.x.col(0)) + traj.u.col(0).dot(w.R() * traj.u.col(0)) : 0.0;
  for (Index i = 1; i < N; ++i) {
    const double cur = traj.x.col(i).dot(w.Q() * traj.x.col(i)) + traj.u.col(i).dot(w.R() * traj.u.col(i));
    out(i) = out(i - 1) + 0.5 * (traj.times(i) - traj.times(i - 1)) * (prev + cur);
    prev = cur;
  }
  return out;
}

namespace {

void check_constraint(const Matrix& K1, const Matrix& K2, const Trajectory& traj, Index i) {
  const Vector res = K1 * traj.x.col(i) + K2 * traj.u.col(i);
  double sup = traj.x.size() > 0 ? traj.x.col(i).cwiseAbs().maxCoeff() : 0.0;
  if (traj.u.size() > 0) sup = std::max(sup, traj.u.col(i).cwiseAbs().maxCoeff());
  if (res.size() > 0 && res.cwiseAbs().maxCoeff() > 1e-6 * (1.0 + sup)) {
    throw ConstraintViolated("closed_loop_replay: feedback constraint violated at node " + std::to_string(i));
  }
}

}  // namespace

Trajectory closed_loop_replay(const DaeLti& dae, const Matrix& K1, const Matrix& K2, const Vector& z,
                              const Vector& grid, double tol) {
  const Index n = dae.n();
  const Index m = dae.m();
  require_shape(K1, n + m, n, "K1");
  require_shape(K2, n + m, m, "K2");
  Matrix Ec(dae.c() + n + m, n);
  Ec << dae.E(), Matrix::Zero(n + m, n);
  Matrix Ac(dae.c() + n + m, n);
  Ac << dae.A(), K1;
  Matrix Bc(dae.c() + n + m, m);
  Bc << dae.B(), K2;
  const DaeLti closed(Ec, Ac, Bc);
  const AssociatedOdeLti assoc = associate(closed, tol);
  if (!assoc.zero_feedthrough()) {
    throw ConstraintViolated("closed_loop_replay: the constrained system has free inputs");
  }
  Vector zc = Vector::Zero(closed.c());
  zc.head(dae.c()) = z;
  if (!is_consistent(closed, assoc, zc, tol)) {
    throw InconsistentInitialState("closed_loop_replay: z is not consistent with the constraint");
  }
  const Simulation sim = propagate_free_response(
      OdeLti(assoc.A_l, Matrix::Zero(assoc.states(), 0), assoc.C_l, Matrix::Zero(n + m, 0)), assoc.M * zc, grid);
  Trajectory traj;
  traj.times = grid;
  traj.x = sim.outputs.topRows(n);
  traj.u = sim.outputs.bottomRows(m);
  for (Index i = 0; i < traj.size(); ++i) check_constraint(K1, K2, traj, i);
  return traj;
}

Trajectory closed_loop_replay(const DaeLti& dae, const AssociatedOdeLti& assoc, const FiniteHorizonSolution& sol,
                              const Vector& z) {
  const Index N = sol.times.size() - 1;
  if (N < 1 || static_cast<Index>(sol.K.size()) != N + 1 || static_cast<Index>(sol.K1.size()) != N + 1) {
    throw GridError("closed_loop_replay: solution grid is inconsistent");
  }
  const double h = uniform_step(sol.times);
  const Index n = dae.n();
  const Index m = dae.m();
  Trajectory traj;
  traj.times = sol.times;
  traj.x.resize(n, N + 1);
  traj.u.resize(m, N + 1);
  Vector v = assoc.M * z;
  for (Index i = 0; i <= N; ++i) {
    const Matrix& K = sol.K[static_cast<std::size_t>(N - i)];
    const Vector xu = (assoc.C_l - assoc.D_l * K) * v;
    traj.x.col(i) = xu.head(n);
    traj.u.col(i) = xu.tail(m);
    check_constraint(sol.K1[static_cast<std::size_t>(i)], sol.K2, traj, i);
    if (i == N) break;
    const Matrix& Kb = sol.K[static_cast<std::size_t>(N - i - 1)];
    const Matrix A0 = assoc.A_l - assoc.B_l * K;
    const Matrix Am = assoc.A_l - assoc.B_l * (0.5 * (K + Kb));
    const Matrix A1 = assoc.A_l - assoc.B_l * Kb;
    const Vector k1 = A0 * v;
    const Vector k2 = Am * (v + 0.5 * h * k1);
    const Vector k3 = Am * (v + 0.5 * h * k2);
    const Vector k4 = A1 * (v + h * k3);
    v += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return traj;
}

}  // namespace daelti
