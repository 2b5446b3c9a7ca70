#include "daelti/associate.hpp"

#include "daelti/errors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

namespace daelti {

bool AssociatedOdeLti::zero_feedthrough() const {
  return B_l.cols() == 1 && B_l.isZero(0.0) && D_l.isZero(0.0);
}

namespace {

Matrix random_orthogonal(Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> nd(0.0, 1.0);
  Matrix X(n, n);
  for (Index j = 0; j < n; ++j)
    for (Index i = 0; i < n; ++i) X(i, j) = nd(rng);
  Eigen::HouseholderQR<Matrix> qr(X);
  Matrix Q = qr.householderQ();
  // Fix column signs so the distribution does not depend on QR conventions.
  const Matrix R = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Index j = 0; j < n; ++j)
    if (R(j, j) < 0.0) Q.col(j) = -Q.col(j);
  return Q;
}

double max_abs(const Matrix& M) { return M.size() == 0 ? 0.0 : M.cwiseAbs().maxCoeff(); }

double relative_gap(const Matrix& lhs, const Matrix& rhs) {
  if (lhs.rows() != rhs.rows() || lhs.cols() != rhs.cols()) return std::numeric_limits<double>::infinity();
  return max_abs(lhs - rhs) / std::max(1.0, max_abs(lhs));
}

}  // namespace

AssociatedOdeLti associate(const DaeLti& dae, const AssociateOptions& options) {
  const double tol = options.tol;
  const Index c = dae.c();
  const Index n = dae.n();
  const Index m = dae.m();

  // E = U diag(sigma) V^T; S = diag(sigma_r^{-1}, I) U^T and T = V give S E T = diag(I_r, 0).
  const Svd svd = full_svd(dae.E());
  Index r = 0;
  while (r < svd.s.size() && svd.s(r) > tol * dae.scale()) ++r;
  Matrix S = svd.U.transpose();
  for (Index i = 0; i < r; ++i) S.row(i) /= svd.s(i);
  const Matrix& T = svd.V;
  const Matrix SAT = S * dae.A() * T;
  const Matrix SB = S * dae.B();

  const Index nr = n - r;
  const Index cr = c - r;
  const Index s = nr + m;
  const Matrix At = SAT.topLeftCorner(r, r);
  Matrix G(r, s);
  G << SAT.topRightCorner(r, nr), SB.topRows(r);
  const Matrix Ct = SAT.bottomLeftCorner(cr, r);
  Matrix Dt(cr, s);
  Dt << SAT.bottomRightCorner(cr, nr), SB.bottomRows(cr);

  const OdeLti reduced(At, G, Ct, Dt);
  const Subspace V = weakly_unobservable(reduced, tol);
  const OutputNullingFriend fr = output_nulling_friend(reduced, V, tol);

  Matrix Vb = V.basis();
  Matrix L = fr.L;
  if (options.basis_seed) {
    std::mt19937_64 rng(*options.basis_seed);
    if (Vb.cols() > 0) Vb = Vb * random_orthogonal(Vb.cols(), rng);
    if (!fr.zero_feedthrough()) L = L * random_orthogonal(L.cols(), rng);
  }

  // (x; u) = blkdiag(T, I_m) (p; q) with p = Vb v, q = F p + L g.
  const Matrix Tm = blkdiag(T, Matrix::Identity(m, m));
  Matrix IF(r + s, r);
  IF << Matrix::Identity(r, r), fr.F;
  Matrix ZL(r + s, L.cols());
  ZL << Matrix::Zero(r, L.cols()), L;

  AssociatedOdeLti out;
  out.n = n;
  out.m = m;
  out.A_l = Vb.transpose() * (At + G * fr.F) * Vb;
  out.B_l = Vb.transpose() * G * L;
  out.C_l = Tm * IF * Vb;
  out.D_l = Tm * ZL;
  if (fr.zero_feedthrough()) {
    out.B_l.setZero();
    out.D_l.setZero();
  }
  out.M = pinv(dae.E() * out.C_s());
  return out;
}

AssociatedOdeLti associate(const DaeLti& dae, double tol) {
  AssociateOptions o;
  o.tol = tol;
  return associate(dae, o);
}

VerificationReport verify_associated(const DaeLti& dae, const AssociatedOdeLti& sys, double tol,
                                     std::uint64_t seed, int simulations) {
  VerificationReport rep;
  const Index nh = sys.A_l.rows();
  const Index k = sys.B_l.cols();
  const Index nm = dae.n() + dae.m();
  auto fail = [&rep](bool& flag, const std::string& msg) {
    flag = false;
    rep.failures.push_back(msg);
  };

  if (sys.A_l.cols() != nh || sys.B_l.rows() != nh || sys.C_l.rows() != nm || sys.C_l.cols() != nh ||
      sys.D_l.rows() != nm || sys.D_l.cols() != k || sys.M.rows() != nh || sys.M.cols() != dae.c() ||
      sys.n != dae.n() || sys.m != dae.m()) {
    fail(rep.shapes, "shape mismatch");
  }
  if (sys.C_l.rows() != nm || sys.D_l.rows() != nm) return rep;

  const double thr = tol * dae.scale();
  const bool degenerate = k == 1 && sys.B_l.isZero(0.0) && sys.D_l.isZero(0.0);
  if (!degenerate && rank_abs(sys.D_l, thr) != k) fail(rep.feedthrough_rank, "D_l is not of full column rank");

  const Matrix ED = dae.E() * sys.D_s();
  const double ed_limit = std::max(tol, 1e-8) * std::max(1.0, norm2(dae.E())) * std::max(1.0, norm2(sys.D_s()));
  if (ED.size() > 0 && norm2(ED) > ed_limit) fail(rep.ed_s_zero, "E D_s is not zero");

  const Matrix EC = dae.E() * sys.C_s();
  const Index rank_ec = rank_abs(EC, thr * std::max(1.0, norm2(sys.C_s())));
  if (rank_ec != nh || EC.cols() != nh) fail(rep.ec_s_rank, "rank E C_s differs from the state dimension");

  if (rep.shapes) {
    const Matrix MEC = sys.M * EC;
    if (nh > 0 && max_abs(MEC - Matrix::Identity(nh, nh)) > 1e-8) fail(rep.state_map, "M E C_s is not the identity");
  }
  if (nh > rank_abs(dae.E(), thr)) fail(rep.dimension_bound, "state dimension exceeds rank E");

  if (!rep.shapes || simulations <= 0) return rep;

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd(0.0, 1.0);
  std::uniform_real_distribution<double> ud(0.0, 1.0);
  const double rho = std::max(1.0, norm2(sys.A_l));
  const double h = 1e-3 / std::pow(rho, 1.5);
  const Index steps = 200;
  const Vector grid = uniform_grid(0.0, h * steps, steps);
  for (int trial = 0; trial < simulations; ++trial) {
    Vector v0(nh);
    for (Index i = 0; i < nh; ++i) v0(i) = nd(rng);
    Matrix g(k, grid.size());
    for (Index i = 0; i < k; ++i) {
      const double a = nd(rng);
      const double b = nd(rng);
      const double w = 0.5 + 1.5 * ud(rng);
      const double ph = 2.0 * std::numbers::pi * ud(rng);
      for (Index j = 0; j < grid.size(); ++j) g(i, j) = a + b * std::sin(w * grid(j) + ph);
    }
    const Trajectory traj = lift_solution(dae, sys, v0, g, grid);
    rep.max_behavior_residual = std::max(rep.max_behavior_residual, behavior_residual(dae, traj));
  }
  if (!(rep.max_behavior_residual <= 1e-5)) {
    std::ostringstream os;
    os << "behavior residual " << rep.max_behavior_residual << " exceeds 1e-5";
    fail(rep.behavior, os.str());
  }
  return rep;
}

ProjectedSolution project_solution(const DaeLti& dae, const AssociatedOdeLti& assoc, const Trajectory& traj) {
  traj.validate();
  if (traj.x.rows() != dae.n() || traj.u.rows() != dae.m()) throw ShapeError("project_solution: trajectory shape");
  ProjectedSolution out;
  out.v = assoc.M * (dae.E() * traj.x);
  Matrix xu(dae.n() + dae.m(), traj.size());
  xu << traj.x, traj.u;
  out.g = pinv(assoc.D_l) * (xu - assoc.C_l * out.v);
  return out;
}

Trajectory lift_solution(const DaeLti& dae, const AssociatedOdeLti& assoc, const Vector& v0, const Matrix& g,
                         const Vector& grid) {
  const Simulation sim = simulate(assoc.system(), v0, g, grid);
  Trajectory traj;
  traj.times = grid;
  traj.x = sim.outputs.topRows(dae.n());
  traj.u = sim.outputs.bottomRows(dae.m());
  return traj;
}

AssociatedOdeLti apply_feedback(const AssociatedOdeLti& s, const FeedbackTransform& f) {
  const Matrix Ti = f.T.inverse();
  AssociatedOdeLti out = s;
  out.A_l = f.T * (s.A_l + s.B_l * f.K) * Ti;
  out.B_l = f.T * s.B_l * f.U;
  out.C_l = (s.C_l + s.D_l * f.K) * Ti;
  out.D_l = s.D_l * f.U;
  out.M = f.T * s.M;
  return out;
}

namespace {

FeedbackTransform recover(const AssociatedOdeLti& s1, const AssociatedOdeLti& s2, const DaeLti& dae, double tol,
                          std::string& why) {
  FeedbackTransform f;
  const Index n1 = s1.states();
  const Index n2 = s2.states();
  if (n1 != n2) {
    why = "state dimensions differ";
    return f;
  }
  if (s1.inputs() != s2.inputs()) {
    why = "input dimensions differ";
    return f;
  }
  f.T = s2.M * dae.E() * s1.C_s();
  if (n1 > 0) {
    const Svd d = full_svd(f.T);
    const double smin = d.s(n1 - 1);
    if (!(smin > 0.0) || d.s(0) / smin > 1e12) {
      why = "state transformation is singular";
      return f;
    }
  }
  const Matrix D1p = pinv(s1.D_l);
  const bool zero1 = s1.zero_feedthrough();
  const bool zero2 = s2.zero_feedthrough();
  if (zero1 != zero2) {
    why = "only one realization has zero feedthrough";
    return f;
  }
  const Matrix Ti = n1 > 0 ? Matrix(f.T.inverse()) : Matrix(0, 0);
  f.K = D1p * (s2.C_l * f.T - s1.C_l);
  f.U = zero1 ? Matrix(Matrix::Identity(1, 1)) : Matrix(D1p * s2.D_l);
  if (!zero1 && f.U.rows() > 0) {
    const Svd d = full_svd(f.U);
    if (!(d.s(d.s.size() - 1) > 0.0) || d.s(0) / d.s(d.s.size() - 1) > 1e12) {
      why = "input transformation is singular";
      return f;
    }
  }
  f.residual = std::max({relative_gap(s2.A_l, f.T * (s1.A_l + s1.B_l * f.K) * Ti),
                         relative_gap(s2.B_l, f.T * s1.B_l * f.U), relative_gap(s2.C_l, (s1.C_l + s1.D_l * f.K) * Ti),
                         relative_gap(s2.D_l, s1.D_l * f.U)});
  if (!(f.residual <= tol)) {
    std::ostringstream os;
    os << "identity residual " << f.residual << " exceeds " << tol;
    why = os.str();
  }
  return f;
}

}  // namespace

FeedbackTransform feedback_equivalence(const AssociatedOdeLti& s1, const AssociatedOdeLti& s2, const DaeLti& dae,
                                       double tol) {
  std::string why;
  FeedbackTransform f = recover(s1, s2, dae, tol, why);
  if (!why.empty()) throw NotEquivalent("feedback_equivalence: " + why);
  return f;
}

std::optional<FeedbackTransform> try_feedback_equivalence(const AssociatedOdeLti& s1, const AssociatedOdeLti& s2,
                                                          const DaeLti& dae, double tol) {
  std::string why;
  FeedbackTransform f = recover(s1, s2, dae, tol, why);
  if (!why.empty()) return std::nullopt;
  return f;
}

StabilizableRestriction stabilizable_restriction(const AssociatedOdeLti& assoc, double tol) {
  StabilizableRestriction out;
  const Matrix B = assoc.zero_feedthrough() ? Matrix(Matrix::Zero(assoc.states(), 1)) : assoc.B_l;
  out.V_g = stabilizability_subspace(assoc.A_l, B, tol);
  out.sys_g = restrict_to_invariant(assoc.system(), out.V_g, tol);
  out.Pi = out.V_g.basis().transpose();
  out.M_g = out.Pi * assoc.M;
  out.l = out.V_g.dim();
  return out;
}

}  // namespace daelti
