#include "daelti/galerkin_heat.hpp"

#include "daelti/errors.hpp"
#include "daelti/matrix_io.hpp"
#include "daelti/ode_geometry.hpp"
#include "daelti/quadrature.hpp"
#include "daelti/riccati.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <ostream>

namespace daelti {

namespace {

constexpr double kPi = std::numbers::pi;

Index grid_steps(const HeatConfig& cfg) { return static_cast<Index>(std::llround(cfg.T / cfg.dt)); }

Vector common_grid(const HeatConfig& cfg) { return uniform_grid(0.0, cfg.T, grid_steps(cfg)); }

// Rows: basis functions; columns: quadrature nodes.
Matrix basis_at_nodes(const HeatConfig& cfg, const Vector& nodes) {
  Matrix Phi(cfg.N, nodes.size());
  for (Index q = 0; q < nodes.size(); ++q) Phi.col(q) = heat_basis_values(cfg, nodes(q));
  return Phi;
}

Matrix sines_at_nodes(Index count, const Vector& nodes) {
  Matrix S(count, nodes.size());
  for (Index k = 0; k < count; ++k)
    for (Index q = 0; q < nodes.size(); ++q) S(k, q) = std::sin(static_cast<double>(k + 1) * kPi * nodes(q));
  return S;
}

Matrix exact_gram(const HeatConfig& cfg) {
  const QuadratureRule rule = gauss_legendre(cfg.N + 2);
  const Matrix Phi = basis_at_nodes(cfg, rule.nodes);
  return symmetrize(Phi * rule.weights.asDiagonal() * Phi.transpose());
}

Matrix closed_form_gram(Index N) {
  Matrix G = Matrix::Zero(N, N);
  for (Index k = 0; k < N; ++k) {
    const double i = static_cast<double>(k + 1);
    G(k, k) = 4.0 * (2 * i + 1) * (2 * i + 1) / ((2 * i - 1) * (2 * i + 3));
    if (k + 2 < N) G(k, k + 2) = -2.0 / (2 * i + 3);
    if (k >= 2) G(k, k - 2) = -2.0 / (2 * i - 1);
  }
  return G;
}

// Accurate cross-Gram data for L2 distances between the two bases.
struct NormData {
  Matrix G;  // <phi_i, phi_j>
  Matrix X;  // <phi_i, sin(k pi x)>
};

NormData norm_data(const HeatConfig& cfg) {
  const QuadratureRule rule = gauss_legendre(4 * cfg.N + 20);
  const Matrix Phi = basis_at_nodes(cfg, rule.nodes);
  const Matrix S = sines_at_nodes(cfg.N, rule.nodes);
  return {symmetrize(Phi * rule.weights.asDiagonal() * Phi.transpose()),
          Phi * rule.weights.asDiagonal() * S.transpose()};
}

double distance2(const NormData& nd, const Vector& a, const Vector& z) {
  return a.dot(nd.G * a) - 2.0 * a.dot(nd.X * z) + z.squaredNorm();
}

// Closed loop z' = (A + B K) z, u = K z, by RK4 on the common grid.
Trajectory simulate_sine_loop(const HeatConfig& cfg, const Matrix& A, const Matrix& B, const Matrix& K,
                              const Vector& z0) {
  const Vector grid = common_grid(cfg);
  const Index N = A.rows();
  Matrix C(N + K.rows(), N);
  C << Matrix::Identity(N, N), K;
  const OdeLti loop(A + B * K, Matrix::Zero(N, 0), C, Matrix::Zero(C.rows(), 0));
  const Simulation sim = simulate(loop, z0, Matrix::Zero(0, grid.size()), grid);
  Trajectory traj;
  traj.times = grid;
  traj.x = sim.outputs.topRows(N);
  traj.u = sim.outputs.bottomRows(K.rows());
  return traj;
}

double sine_cost(const Trajectory& traj) {
  Vector f(traj.size());
  for (Index i = 0; i < traj.size(); ++i) f(i) = traj.x.col(i).squaredNorm() + traj.u.col(i).squaredNorm();
  return simpson_integral(f, uniform_step(traj.times));
}

}  // namespace

void HeatConfig::validate() const {
  if (N < 1) throw ShapeError("heat: N must be positive");
  if (N_u < 1 || N_u > N) throw ShapeError("heat: N_u must lie in [1, N]");
  if (mode < 1 || mode > N) throw ShapeError("heat: mode must lie in [1, N]");
  if (!(mu > 0.0)) throw ShapeError("heat: mu must be positive");
  if (!(c > 0.0)) throw ShapeError("heat: c must be positive");
  if (!std::isfinite(lambda)) throw ShapeError("heat: lambda must be finite");
  if (!(T > 0.0) || !(dt > 0.0) || !(dt <= T)) throw ShapeError("heat: need 0 < dt <= T");
  if (std::abs(static_cast<double>(llround(T / dt)) * dt - T) > 1e-9 * T) {
    throw ShapeError("heat: T must be an integer multiple of dt");
  }
  if (quad_order < 0) throw ShapeError("heat: quad_order must be non-negative");
}

Vector heat_basis_values(const HeatConfig& cfg, double x) {
  const Vector P = legendre_values(cfg.N + 1, x);
  Vector phi(cfg.N);
  for (Index k = 1; k <= cfg.N; ++k) {
    phi(k - 1) = cfg.basis == HeatBasis::BoundaryVanishing ? P(k + 1) - P(k - 1) : P(k + 1) - P(k);
  }
  return phi;
}

HeatModels build_heat_models(const HeatConfig& cfg) {
  cfg.validate();
  const Index N = cfg.N;
  const Matrix M_hat = cfg.gram == GramSource::Exact ? exact_gram(cfg) : closed_form_gram(N);

  Matrix Lambda = Matrix::Zero(N, N);
  Matrix A_N = Matrix::Zero(N, N);
  Matrix A_e = Matrix::Zero(N, N);
  const double stiff = cfg.stiffness_uses_c_squared ? cfg.c * cfg.c : cfg.c;
  for (Index k = 0; k < N; ++k) {
    const double i = static_cast<double>(k + 1);
    Lambda(k, k) = (2 * i + 1) / 2.0;
    A_N(k, k) = -2.0 * stiff * (2 * i + 1);
    A_e(k, k) = -cfg.c * cfg.c * i * i * kPi * kPi;
  }

  const QuadratureRule rule = gauss_legendre(cfg.effective_quad_order());
  const Matrix Phi = basis_at_nodes(cfg, rule.nodes);
  const Matrix P_N_sin = Phi * rule.weights.asDiagonal() * sines_at_nodes(N, rule.nodes).transpose();

  const Matrix M_N = Lambda * M_hat;
  Matrix E(N, 2 * N);
  E << M_N, Matrix::Zero(N, N);
  Matrix A(N, 2 * N);
  A << Lambda * A_N, Lambda;
  const Matrix B = Lambda * P_N_sin.leftCols(cfg.N_u);

  Matrix B_e = Matrix::Zero(N, cfg.N_u);
  B_e.topRows(cfg.N_u) = Matrix::Identity(cfg.N_u, cfg.N_u);

  const Vector V0_proj = cfg.lambda * P_N_sin.col(cfg.mode - 1);
  Vector z_e = Vector::Zero(N);
  z_e(cfg.mode - 1) = cfg.lambda;

  return HeatModels{M_hat,
                    Lambda,
                    M_N,
                    A_N,
                    P_N_sin,
                    DaeLti(E, A, B),
                    A_e,
                    B_e,
                    LqWeights(blkdiag(M_hat, cfg.mu * Matrix::Identity(N, N)), Matrix::Identity(cfg.N_u, cfg.N_u),
                              Matrix::Zero(N, N)),
                    Lambda * V0_proj,
                    V0_proj,
                    z_e};
}

ReferenceResult eigenbasis_reference(const HeatConfig& cfg, const HeatModels& models) {
  const Index N = cfg.N;
  ReferenceResult out;
  const CareSolution care =
      solve_care(models.A_e, models.B_e, Matrix::Identity(N, N), Matrix::Identity(cfg.N_u, cfg.N_u));
  out.P = care.P;
  out.K_opt = care.K;
  out.J_e = models.z_e.dot(out.P * models.z_e);
  out.traj = simulate_sine_loop(cfg, models.A_e, models.B_e, -out.K_opt, models.z_e);
  return out;
}

ReferenceResult eigenbasis_reference(const HeatConfig& cfg) { return eigenbasis_reference(cfg, build_heat_models(cfg)); }

DaePipelineResult dae_lq_pipeline(const HeatConfig& cfg, const HeatModels& models) {
  DaePipelineResult out;
  out.assoc = associate(models.dae);
  InfiniteHorizonOptions opt;
  opt.T_sim = cfg.T;
  opt.steps = grid_steps(cfg);
  out.solution = infinite_horizon(models.dae, out.assoc, models.weights, models.z, opt);
  out.J_dae = out.solution.cost;
  out.K_f = out.solution.K_f;
  out.coeffs = out.solution.traj.x.topRows(cfg.N);
  return out;
}

DaePipelineResult dae_lq_pipeline(const HeatConfig& cfg) { return dae_lq_pipeline(cfg, build_heat_models(cfg)); }

LiftedResult lift_and_simulate_closed_loop(const HeatConfig& cfg, const HeatModels& models, const Matrix& K_f) {
  const Index N = cfg.N;
  require_shape(K_f, cfg.N_u, models.dae.n(), "K_f");
  // State of the DAE for V = sin(j pi x): a = Mhat^{-1} P_N sin, error part unused (K_f acts through E).
  Matrix X = Matrix::Zero(models.dae.n(), N);
  X.topRows(N) = models.M_hat.ldlt().solve(models.P_N_sin);
  LiftedResult out;
  out.K_lift = K_f * X;
  out.traj = simulate_sine_loop(cfg, models.A_e, models.B_e, out.K_lift, models.z_e);
  out.J_T = sine_cost(out.traj);
  return out;
}

NaiveResult naive_galerkin_baseline(const HeatConfig& cfg, const HeatModels& models) {
  const Index N = cfg.N;
  Matrix Ag;
  Matrix Bg;
  if (cfg.naive_model == NaiveModel::GramScaled) {
    const auto ldlt = models.M_hat.ldlt();
    Ag = ldlt.solve(models.A_N);
    Bg = ldlt.solve(Matrix(models.P_N_sin.leftCols(cfg.N_u)));
  } else {
    const auto lu = models.M_N.partialPivLu();
    Ag = lu.solve(models.A_N);
    Bg = lu.solve(models.dae.B());
  }
  NaiveResult out;
  const CareSolution care = solve_care(Ag, Bg, models.M_hat, Matrix::Identity(cfg.N_u, cfg.N_u));
  out.P_g = care.P;
  out.K_g = care.K;
  out.J_g = models.V0_proj.dot(out.P_g * models.V0_proj);

  const Vector grid = common_grid(cfg);
  const Simulation sim = propagate_free_response(
      OdeLti(Ag - Bg * out.K_g, Matrix::Zero(N, 0), Matrix::Identity(N, N), Matrix::Zero(N, 0)), models.V0_proj,
      grid);
  out.coeffs = sim.states;

  const Matrix K1g = -out.K_g * models.M_hat.ldlt().solve(models.P_N_sin);
  out.lifted = simulate_sine_loop(cfg, models.A_e, models.B_e, K1g, models.z_e);
  out.J_T_g = sine_cost(out.lifted);
  return out;
}

NaiveResult naive_galerkin_baseline(const HeatConfig& cfg) { return naive_galerkin_baseline(cfg, build_heat_models(cfg)); }

double cross_basis_distance2(const HeatConfig& cfg, const Vector& a, const Vector& z) {
  if (a.size() != cfg.N || z.size() != cfg.N) throw ShapeError("cross_basis_distance2: coefficient length");
  return distance2(norm_data(cfg), a, z);
}

ErrorCurves error_curves(const HeatConfig& cfg, const ReferenceResult& ref, const DaePipelineResult& dae,
                         const LiftedResult& lifted, const NaiveResult& naive) {
  const Index len = ref.traj.size();
  if (dae.coeffs.cols() != len || lifted.traj.size() != len || naive.coeffs.cols() != len ||
      naive.lifted.size() != len) {
    throw GridError("error_curves: trajectories are not on a common grid");
  }
  const NormData nd = norm_data(cfg);
  ErrorCurves out;
  out.t = ref.traj.times;
  out.e_sol.resize(len);
  out.e_sim.resize(len);
  out.e_g.resize(len);
  out.e_sim_g.resize(len);
  for (Index i = 0; i < len; ++i) {
    const Vector z = ref.traj.x.col(i);
    out.e_sol(i) = distance2(nd, dae.coeffs.col(i), z);
    out.e_sim(i) = (lifted.traj.x.col(i) - z).squaredNorm();
    out.e_g(i) = distance2(nd, naive.coeffs.col(i), z);
    out.e_sim_g(i) = (naive.lifted.x.col(i) - z).squaredNorm();
  }
  return out;
}

void write_error_csv(std::ostream& os, const ErrorCurves& c) {
  os << "t,e_sol,e_sim,e_g,e_sim_g\n";
  for (Index i = 0; i < c.t.size(); ++i) {
    os << format_decimal(c.t(i)) << ',' << format_decimal(c.e_sol(i)) << ',' << format_decimal(c.e_sim(i)) << ','
       << format_decimal(c.e_g(i)) << ',' << format_decimal(c.e_sim_g(i)) << '\n';
  }
}

HeatReport run_heat_benchmark(const HeatConfig& cfg) {
  HeatModels models = build_heat_models(cfg);
  ReferenceResult ref = eigenbasis_reference(cfg, models);
  DaePipelineResult dae = dae_lq_pipeline(cfg, models);
  LiftedResult lifted = lift_and_simulate_closed_loop(cfg, models, dae.K_f);
  NaiveResult naive = naive_galerkin_baseline(cfg, models);
  ErrorCurves errors = error_curves(cfg, ref, dae, lifted, naive);
  const double max_e_sim = errors.e_sim.maxCoeff();
  return HeatReport{std::move(models), std::move(ref),    std::move(dae), std::move(lifted),
                    std::move(naive),  std::move(errors), max_e_sim};
}

void write_costs(std::ostream& os, const HeatReport& r) {
  os << "J_e " << format_decimal(r.reference.J_e) << '\n';
  os << "J_dae " << format_decimal(r.dae.J_dae) << '\n';
  os << "J_T " << format_decimal(r.lifted.J_T) << '\n';
  os << "J_g " << format_decimal(r.naive.J_g) << '\n';
  os << "J_T_g " << format_decimal(r.naive.J_T_g) << '\n';
  os << "max_e_sim " << format_decimal(r.max_e_sim) << '\n';
}

}  // namespace daelti
