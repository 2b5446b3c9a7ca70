#pragma once

#include "daelti/associate.hpp"
#include "daelti/dae_model.hpp"
#include "daelti/linalg.hpp"
#include "daelti/lq_solver.hpp"
#include "daelti/trajectory.hpp"

#include <iosfwd>

namespace daelti {

/// Galerkin basis on [-1, 1] built from Legendre polynomials.
enum class HeatBasis {
  BoundaryVanishing,  // phi_k = P_{k+1} - P_{k-1}, zero at both ends
  Adjacent,           // phi_k = P_{k+1} - P_k
};

enum class GramSource {
  Exact,       // inner products of the basis, computed exactly
  ClosedForm,  // 4(2i+1)^2/((2i-1)(2i+3)) on the diagonal, -2/(2i+3), -2/(2i-1) off it
};

/// Dynamics of the plain Galerkin baseline (no error input).
enum class NaiveModel {
  GramScaled,    // a' = Mhat^{-1} A_N a + Mhat^{-1} P_N(sin) u
  MassScaled,    // a' = M_N^{-1} A_N a + M_N^{-1} B u
};

/// Heat equation V_t = c^2 V_xx on [-1, 1] with Dirichlet boundary,
/// N_u sine actuators and the initial state lambda * sin(mode * pi * x).
struct HeatConfig {
  Index N = 40;
  Index N_u = 35;
  double mu = 0.01;
  double c = 1.0 / 30.0;
  double lambda = 10.0;
  Index mode = 34;
  double T = 5.0;
  /// Gauss-Legendre nodes for the projections P_N(sin); 0 selects N + 2.
  Index quad_order = 0;
  HeatBasis basis = HeatBasis::BoundaryVanishing;
  GramSource gram = GramSource::Exact;
  bool stiffness_uses_c_squared = true;
  NaiveModel naive_model = NaiveModel::GramScaled;
  /// Step of the closed-loop simulations and of the common output grid.
  double dt = 1e-3;

  Index effective_quad_order() const { return quad_order > 0 ? quad_order : N + 2; }
  /// Throws ShapeError on invalid values.
  void validate() const;
};

struct HeatModels {
  Matrix M_hat;    // Gram matrix <phi_i, phi_j>
  Matrix Lambda;   // diag((2i + 1) / 2)
  Matrix M_N;      // Lambda * M_hat
  Matrix A_N;      // stiffness <A phi_i, phi_j>
  Matrix P_N_sin;  // column k: <phi_i, sin(k pi x)>, i = 1..N
  DaeLti dae;      // E = [M_N, 0], A = [Lambda A_N, Lambda], B = Lambda P_N_sin(:, 1..N_u)
  Matrix A_e;      // diag(-c^2 i^2 pi^2)
  Matrix B_e;      // [I_{N_u}; 0]
  LqWeights weights;  // Q = diag(M_hat, mu I_N), R = I_{N_u}, Q0 = 0
  Vector z;        // Lambda P_N V_0, the initial value of Ex
  Vector V0_proj;  // P_N V_0
  Vector z_e;      // lambda e_mode, sine coordinates of V_0
};

HeatModels build_heat_models(const HeatConfig& cfg);

/// Sine-basis trajectory: x holds the N sine coordinates, u the inputs.
struct ReferenceResult {
  double J_e = 0.0;
  Matrix K_opt;  // u = -K_opt z
  Matrix P;
  Trajectory traj;
};

/// Standard LQ on z' = A_e z + B_e u with unit weights.
ReferenceResult eigenbasis_reference(const HeatConfig& cfg, const HeatModels& models);
ReferenceResult eigenbasis_reference(const HeatConfig& cfg);

struct DaePipelineResult {
  double J_dae = 0.0;
  Matrix K_f;         // u = K_f x
  Matrix coeffs;      // a_*(t) on the common grid (N x steps+1)
  InfiniteHorizonSolution solution;  // on [0, T]
  AssociatedOdeLti assoc;
};

DaePipelineResult dae_lq_pipeline(const HeatConfig& cfg, const HeatModels& models);
DaePipelineResult dae_lq_pipeline(const HeatConfig& cfg);

struct LiftedResult {
  double J_T = 0.0;
  Matrix K_lift;  // u = K_lift z on the sine coordinates
  Trajectory traj;
};

/// Column j of the lifted gain is K_f applied to the coefficients of
/// sin(j pi x); the sine model is then simulated by RK4 on [0, T].
LiftedResult lift_and_simulate_closed_loop(const HeatConfig& cfg, const HeatModels& models, const Matrix& K_f);

struct NaiveResult {
  double J_g = 0.0;
  double J_T_g = 0.0;  // truncated cost of the lifted naive gain
  Matrix K_g;          // u = -K_g a
  Matrix P_g;
  Matrix coeffs;       // a_g(t) on the common grid
  Trajectory lifted;   // sine-basis closed loop under the lifted naive gain
};

/// Standard LQ on the plain Galerkin model with a(0) = P_N V_0 and weight
/// a^T M_hat a + u^T u.
NaiveResult naive_galerkin_baseline(const HeatConfig& cfg, const HeatModels& models);
NaiveResult naive_galerkin_baseline(const HeatConfig& cfg);

struct ErrorCurves {
  Vector t;
  Vector e_sol;    // |V_* - V_opt|^2
  Vector e_sim;    // |V_sim - V_opt|^2
  Vector e_g;      // |V_g - V_opt|^2
  Vector e_sim_g;  // |V_sim,g - V_opt|^2
};

/// Squared L2(-1, 1) distances; Legendre/sine cross terms use an accurate
/// Gauss rule independent of quad_order. Throws GridError on grid mismatch.
ErrorCurves error_curves(const HeatConfig& cfg, const ReferenceResult& ref, const DaePipelineResult& dae,
                         const LiftedResult& lifted, const NaiveResult& naive);

/// Squared L2 norm of sum_k a_k phi_k - sum_k z_k sin(k pi x).
double cross_basis_distance2(const HeatConfig& cfg, const Vector& a, const Vector& z);

/// Basis values phi_1..phi_N at x.
Vector heat_basis_values(const HeatConfig& cfg, double x);

void write_error_csv(std::ostream& os, const ErrorCurves& curves);

struct HeatReport {
  HeatModels models;
  ReferenceResult reference;
  DaePipelineResult dae;
  LiftedResult lifted;
  NaiveResult naive;
  ErrorCurves errors;
  double max_e_sim = 0.0;
};

HeatReport run_heat_benchmark(const HeatConfig& cfg);

/// Labeled cost table: J_e, J_dae, J_T, J_g, J_T_g, max_e_sim.
void write_costs(std::ostream& os, const HeatReport& report);

}  // namespace daelti
