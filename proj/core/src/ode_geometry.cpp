#include "daelti/ode_geometry.hpp"

#include "daelti/errors.hpp"
#include "daelti/schur.hpp"
#include "daelti/trajectory.hpp"

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>

namespace daelti {

OdeLti::OdeLti(Matrix A, Matrix G, Matrix C, Matrix D)
    : A_(std::move(A)), G_(std::move(G)), C_(std::move(C)), D_(std::move(D)) {
  const Index r = A_.rows();
  require_shape(A_, r, r, "OdeLti A");
  require_shape(G_, r, G_.cols(), "OdeLti G");
  require_shape(C_, C_.rows(), r, "OdeLti C");
  require_shape(D_, C_.rows(), G_.cols(), "OdeLti D");
  require_finite(A_, "OdeLti A");
  require_finite(G_, "OdeLti G");
  require_finite(C_, "OdeLti C");
  require_finite(D_, "OdeLti D");
}

double OdeLti::scale() const {
  const double s = std::max({norm2(A_), norm2(G_), norm2(C_), norm2(D_)});
  return s > 0.0 ? s : 1.0;
}

Simulation simulate(const OdeLti& sys, const Vector& v0, const Matrix& inputs, const Vector& grid) {
  const Index r = sys.states();
  const Index N = grid.size();
  if (v0.size() != r) throw ShapeError("simulate: initial state has wrong dimension");
  require_shape(inputs, sys.inputs(), N, "simulate inputs");
  const double h = uniform_step(grid);

  Simulation out;
  out.times = grid;
  out.states.resize(r, N);
  out.states.col(0) = v0;
  const Matrix& A = sys.A();
  const Matrix& G = sys.G();
  Vector v = v0;
  for (Index k = 0; k + 1 < N; ++k) {
    const Vector g0 = G * inputs.col(k);
    const Vector g1 = G * inputs.col(k + 1);
    const Vector gm = 0.5 * (g0 + g1);
    const Vector k1 = A * v + g0;
    const Vector k2 = A * (v + 0.5 * h * k1) + gm;
    const Vector k3 = A * (v + 0.5 * h * k2) + gm;
    const Vector k4 = A * (v + h * k3) + g1;
    v += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    out.states.col(k + 1) = v;
  }
  out.outputs = sys.C() * out.states + sys.D() * inputs;
  return out;
}

Simulation propagate_free_response(const OdeLti& sys, const Vector& v0, const Vector& grid) {
  const Index r = sys.states();
  const Index N = grid.size();
  if (v0.size() != r) throw ShapeError("propagate_free_response: initial state has wrong dimension");
  const double h = uniform_step(grid);
  Simulation out;
  out.times = grid;
  out.states.resize(r, N);
  out.states.col(0) = v0;
  if (r > 0) {
    const Matrix Phi = (sys.A() * h).exp();
    for (Index k = 0; k + 1 < N; ++k) out.states.col(k + 1) = Phi * out.states.col(k);
  }
  out.outputs = sys.C() * out.states;
  return out;
}

Subspace weakly_unobservable(const OdeLti& sys, double tol) {
  const Index r = sys.states();
  const Index p = sys.outputs();
  const double thr = tol * sys.scale();
  Matrix AC(r + p, r);
  AC << sys.A(), sys.C();
  Matrix GD(r + p, sys.inputs());
  GD << sys.G(), sys.D();
  const Subspace input_image = image_abs(GD, thr);

  Subspace V = Subspace::full(r);
  for (Index it = 0; it <= r; ++it) {
    Matrix lifted = Matrix::Zero(r + p, V.dim());
    lifted.topRows(r) = V.basis();
    const Subspace target = sum(Subspace(lifted), input_image);
    Subspace next = preimage(AC, target, tol);
    // Intersect with V to keep the sequence monotone under rounding.
    next = intersect(next, V);
    if (next.dim() == V.dim()) return next;
    V = next;
  }
  return V;
}

bool OutputNullingFriend::zero_feedthrough() const { return L.cols() == 1 && L.isZero(0.0); }

OutputNullingFriend output_nulling_friend(const OdeLti& sys, const Subspace& V, double tol) {
  const Index r = sys.states();
  const Index s = sys.inputs();
  const Index p = sys.outputs();
  if (V.ambient_dim() != r) throw ShapeError("output_nulling_friend: subspace has wrong ambient dimension");
  const double scale = sys.scale();
  const Matrix& Vb = V.basis();
  const Index d = V.dim();

  OutputNullingFriend out;
  out.F = Matrix::Zero(s, r);
  if (d > 0) {
    // Unknowns (f_i, c_i):  G f_i - Vb c_i = -A v_i,  D f_i = -C v_i.
    Matrix lhs = Matrix::Zero(r + p, s + d);
    lhs.topLeftCorner(r, s) = sys.G();
    lhs.topRightCorner(r, d) = -Vb;
    lhs.bottomLeftCorner(p, s) = sys.D();
    Matrix rhs(r + p, d);
    rhs << -(sys.A() * Vb), -(sys.C() * Vb);
    Eigen::CompleteOrthogonalDecomposition<Matrix> cod(lhs);
    cod.setThreshold(tol);
    const Matrix sol = cod.solve(rhs);
    const double residual = (lhs * sol - rhs).cwiseAbs().maxCoeff();
    if (residual > std::max(tol, 1e-8) * scale) {
      throw ResidualTooLarge("output_nulling_friend: subspace is not output nulling (residual " +
                             std::to_string(residual) + ")");
    }
    out.F = sol.topRows(s) * Vb.transpose();
  }

  const Subspace kerD = kernel_abs(sys.D(), tol * scale);
  const Subspace pre = preimage(sys.G(), V, tol);
  const Subspace Lsub = intersect(kerD, pre);
  out.L = Lsub.dim() > 0 ? Lsub.basis() : Matrix::Zero(s, 1);
  return out;
}

Subspace reachable_subspace(const Matrix& A, const Matrix& B, double tol) {
  const Index r = A.rows();
  require_shape(A, r, r, "reachable_subspace A");
  require_shape(B, r, B.cols(), "reachable_subspace B");
  double scale = std::max(norm2(A), norm2(B));
  if (scale == 0.0) scale = 1.0;
  const double thr = tol * scale;
  Subspace R = image_abs(B, thr);
  for (Index it = 0; it <= r; ++it) {
    if (R.dim() == 0 || R.dim() == r) break;
    const Subspace next = sum(R, image_abs(A * R.basis(), thr));
    if (next.dim() == R.dim()) break;
    R = next;
  }
  return R;
}

Subspace stabilizability_subspace(const Matrix& A, const Matrix& B, double tol, double tol_eig) {
  const Subspace reach = reachable_subspace(A, B, tol);
  if (reach.dim() == A.rows()) return reach;
  return sum(reach, stable_invariant_subspace(A, tol_eig));
}

OdeLti restrict_to_invariant(const OdeLti& sys, const Subspace& V, double tol) {
  const Index r = sys.states();
  if (V.ambient_dim() != r) throw ShapeError("restrict_to_invariant: subspace has wrong ambient dimension");
  const Matrix& W = V.basis();
  const Matrix comp = Matrix::Identity(r, r) - W * W.transpose();
  const double scale = sys.scale();
  const double leak_A = V.dim() > 0 ? (comp * sys.A() * W).cwiseAbs().maxCoeff() : 0.0;
  const double leak_G = sys.inputs() > 0 && r > 0 ? (comp * sys.G()).cwiseAbs().maxCoeff() : 0.0;
  const double limit = std::max(tol, 1e-8) * scale;
  if (leak_A > limit) throw NotInvariant("restrict_to_invariant: subspace is not A-invariant");
  if (leak_G > limit) throw NotInvariant("restrict_to_invariant: input image leaves the subspace");
  return OdeLti(W.transpose() * sys.A() * W, W.transpose() * sys.G(), sys.C() * W, sys.D());
}

}  // namespace daelti
