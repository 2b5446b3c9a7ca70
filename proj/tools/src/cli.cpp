#include "daelti/cli.hpp"

#include "daelti/associate.hpp"
#include "daelti/dae_model.hpp"
#include "daelti/errors.hpp"
#include "daelti/galerkin_heat.hpp"
#include "daelti/lq_solver.hpp"
#include "daelti/matrix_io.hpp"
#include "daelti/problem.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <ostream>
#include <sstream>

namespace daelti::cli {

namespace {

namespace fs = std::filesystem;

struct Options {
  std::string problem;
  double tol = kGeometryTol;
  std::optional<Index> steps;
  std::optional<double> horizon;
  std::uint64_t seed = 0;
  std::string out_dir;
  std::string z;
  std::optional<double> t1;
  HeatConfig heat;
  std::string heat_basis = "vanishing";
  std::string heat_gram = "exact";
  std::string heat_stiffness = "c2";
  std::string heat_naive = "gram";
};

const char* kFormats =
    "Problem files are JSON objects with members E, A, B (arrays of rows) and optional Q, R, Q0 (arrays of "
    "rows), z (array) and t1 (number). Matrices are written as text: a 'rows cols' header followed by one line "
    "per row. Trajectories are CSV with header t,x1..xn,u1..um.\n"
    "Exit codes: 0 success, 1 parse or shape error, 2 not stabilizable, 3 inconsistent initial value, "
    "4 other numerical failure.";

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ParseError("cannot write " + path.string());
  f << text;
  if (!f) throw ParseError("cannot write " + path.string());
}

/// Output directory, created on demand; empty when files are not requested.
std::optional<fs::path> output_dir(const Options& o) {
  if (o.out_dir.empty()) return std::nullopt;
  fs::create_directories(o.out_dir);
  return fs::path(o.out_dir);
}

std::string bool_text(bool b) { return b ? "true" : "false"; }

LqWeights problem_weights(const Problem& p) {
  const DaeLti& d = p.dae;
  const Matrix Q = p.Q.value_or(Matrix::Identity(d.n(), d.n()));
  const Matrix R = p.R.value_or(Matrix::Identity(d.m(), d.m()));
  const Matrix Q0 = p.Q0.value_or(Matrix::Zero(d.c(), d.c()));
  require_shape(Q, d.n(), d.n(), "Q");
  require_shape(R, d.m(), d.m(), "R");
  require_shape(Q0, d.c(), d.c(), "Q0");
  return LqWeights(Q, R, Q0);
}

Vector initial_value(const Options& o, const Problem& p) {
  Vector z;
  if (!o.z.empty()) {
    z = parse_vector(o.z);
  } else if (p.z) {
    z = *p.z;
  } else {
    throw ShapeError("an initial value is required: pass --z or set \"z\" in the problem file");
  }
  if (z.size() != p.dae.c()) throw ShapeError("z must have one entry per row of E");
  return z;
}

void print_matrix(std::ostream& out, const std::string& name, const Matrix& M) {
  out << name << '\n' << matrix_to_string(M);
}

std::string trajectory_text(const Trajectory& traj) {
  std::ostringstream os;
  write_trajectory_csv(os, traj);
  return os.str();
}

int cmd_associate(const Options& o, std::ostream& out) {
  const Problem p = load_problem(o.problem);
  const AssociatedOdeLti s = associate(p.dae, o.tol);
  const VerificationReport rep = verify_associated(p.dae, s, o.tol, o.seed);
  const std::pair<const char*, const Matrix*> mats[] = {
      {"A_l", &s.A_l}, {"B_l", &s.B_l}, {"C_l", &s.C_l}, {"D_l", &s.D_l}, {"M", &s.M}};
  for (const auto& [name, M] : mats) print_matrix(out, name, *M);
  out << "states: " << s.states() << ", inputs: " << s.inputs() << '\n';
  out << "verification: " << (rep.ok() ? "ok" : "failed") << ", max behavior residual: "
      << format_decimal(rep.max_behavior_residual) << '\n';
  for (const std::string& f : rep.failures) out << "  " << f << '\n';
  if (const auto dir = output_dir(o)) {
    for (const auto& [name, M] : mats) write_text(*dir / (std::string(name) + ".txt"), matrix_to_string(*M));
  }
  return rep.ok() ? kOk : kNumericalFailure;
}

int cmd_check(const Options& o, std::ostream& out) {
  const Problem p = load_problem(o.problem);
  const AssociatedOdeLti s = associate(p.dae, o.tol);
  out << "impulse_controllable: " << bool_text(impulse_controllable(p.dae, o.tol))
      << ", stabilizable: " << bool_text(pencil_stabilizability_test(p.dae, s, o.tol))
      << ", dim V(E,A,B): " << consistency_space(p.dae, s, o.tol).dim() << '\n';
  if (!o.z.empty() || p.z) {
    const Vector z = initial_value(o, p);
    const bool consistent = is_consistent(p.dae, s, z, o.tol);
    out << "consistent: " << bool_text(consistent);
    if (consistent) out << ", behaviorally_stabilizable: " << bool_text(is_behaviorally_stabilizable(p.dae, s, z, o.tol));
    out << '\n';
  }
  return kOk;
}

int cmd_lq_finite(const Options& o, std::ostream& out) {
  const Problem p = load_problem(o.problem);
  const LqWeights w = problem_weights(p);
  const Vector z = initial_value(o, p);
  const std::optional<double> t1 = o.t1 ? o.t1 : p.t1;
  if (!t1) throw ShapeError("a horizon is required: pass --t1 or set \"t1\" in the problem file");
  const AssociatedOdeLti s = associate(p.dae, o.tol);
  const FiniteHorizonSolution sol = finite_horizon(p.dae, s, w, z, *t1, o.steps);
  out << "cost: " << format_decimal(sol.cost) << '\n';
  print_matrix(out, "P(t1)", sol.P.back());
  print_matrix(out, "K_f(0)", sol.K_f.front());
  if (const auto dir = output_dir(o)) {
    write_text(*dir / "cost.txt", format_decimal(sol.cost) + "\n");
    write_text(*dir / "P.txt", matrix_to_string(sol.P.back()));
    write_text(*dir / "K_f.txt", matrix_to_string(sol.K_f.front()));
    write_text(*dir / "K1.txt", matrix_to_string(sol.K1.front()));
    write_text(*dir / "K2.txt", matrix_to_string(sol.K2));
    write_text(*dir / "trajectory.csv", trajectory_text(sol.traj));
  }
  return kOk;
}

int cmd_lq_infinite(const Options& o, std::ostream& out) {
  const Problem p = load_problem(o.problem);
  const LqWeights w = problem_weights(p);
  const Vector z = initial_value(o, p);
  const AssociatedOdeLti s = associate(p.dae, o.tol);
  InfiniteHorizonOptions opts;
  opts.T_sim = o.horizon;
  opts.steps = o.steps;
  opts.tol = o.tol;
  const InfiniteHorizonSolution sol = infinite_horizon(p.dae, s, w, z, opts);
  out << "cost: " << format_decimal(sol.cost) << '\n';
  out << "closed_loop_abscissa: " << format_decimal(sol.closed_loop_abscissa) << '\n';
  out << "are_residual: " << format_decimal(sol.are_residual) << '\n';
  print_matrix(out, "P", sol.P);
  print_matrix(out, "K_f", sol.K_f);
  if (const auto dir = output_dir(o)) {
    write_text(*dir / "cost.txt", format_decimal(sol.cost) + "\n");
    write_text(*dir / "P.txt", matrix_to_string(sol.P));
    write_text(*dir / "K.txt", matrix_to_string(sol.K));
    write_text(*dir / "K_f.txt", matrix_to_string(sol.K_f));
    write_text(*dir / "K1.txt", matrix_to_string(sol.K1));
    write_text(*dir / "K2.txt", matrix_to_string(sol.K2));
    write_text(*dir / "trajectory.csv", trajectory_text(sol.traj));
  }
  return kOk;
}

int cmd_simulate(const Options& o, std::ostream& out) {
  const Problem p = load_problem(o.problem);
  const Vector z = initial_value(o, p);
  const AssociatedOdeLti s = associate(p.dae, o.tol);
  if (!is_consistent(p.dae, s, z, o.tol)) throw InconsistentInitialState("simulate: z is not consistent");
  const double horizon = o.horizon.value_or(p.t1.value_or(1.0));
  const Index steps = o.steps.value_or(1000);
  const Vector grid = uniform_grid(0.0, horizon, steps);
  const Trajectory traj = lift_solution(p.dae, s, s.M * z, Matrix::Zero(s.inputs(), grid.size()), grid);
  const std::string csv = trajectory_text(traj);
  if (const auto dir = output_dir(o)) {
    write_text(*dir / "trajectory.csv", csv);
    out << "behavior_residual: " << format_decimal(behavior_residual(p.dae, traj)) << '\n';
  } else {
    out << csv;
  }
  return kOk;
}

int cmd_heat_demo(Options o, std::ostream& out) {
  HeatConfig& cfg = o.heat;
  cfg.basis = o.heat_basis == "adjacent" ? HeatBasis::Adjacent : HeatBasis::BoundaryVanishing;
  cfg.gram = o.heat_gram == "closed-form" ? GramSource::ClosedForm : GramSource::Exact;
  cfg.stiffness_uses_c_squared = o.heat_stiffness == "c2";
  cfg.naive_model = o.heat_naive == "mass" ? NaiveModel::MassScaled : NaiveModel::GramScaled;
  const HeatReport r = run_heat_benchmark(cfg);
  std::ostringstream costs;
  write_costs(costs, r);
  out << costs.str();
  const fs::path dir = output_dir(o).value_or(fs::path("."));
  write_text(dir / "costs.txt", costs.str());
  std::ostringstream errors;
  write_error_csv(errors, r.errors);
  write_text(dir / "errors.csv", errors.str());
  const HeatModels& m = r.models;
  const std::pair<const char*, Matrix> mats[] = {
      {"M_hat", m.M_hat},          {"Lambda", m.Lambda},        {"M_N", m.M_N},       {"A_N", m.A_N},
      {"P_N_sin", m.P_N_sin},      {"E", m.dae.E()},            {"A", m.dae.A()},     {"B", m.dae.B()},
      {"A_e", m.A_e},              {"B_e", m.B_e},              {"K_f", r.dae.K_f},   {"K_lift", r.lifted.K_lift},
      {"K_opt", r.reference.K_opt}, {"K_g", r.naive.K_g}};
  for (const auto& [name, M] : mats) write_text(dir / (std::string(name) + ".txt"), matrix_to_string(M));
  return kOk;
}

void add_common(CLI::App* sub, Options& o) {
  sub->add_option("problem", o.problem, "Problem file (JSON)")->required();
  sub->add_option("--tol", o.tol, "Relative tolerance of the geometric algorithms")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app("Linear-quadratic control of descriptor systems d(Ex)/dt = Ax + Bu", "daelti");
  app.footer(kFormats);
  app.require_subcommand(1);

  CLI::App* associate_cmd = app.add_subcommand("associate", "Construct and verify the associated ODE realization");
  add_common(associate_cmd, o);
  associate_cmd->add_option("--seed", o.seed, "Seed of the verification simulations")->capture_default_str();
  associate_cmd->add_option("--out-dir", o.out_dir, "Also write A_l, B_l, C_l, D_l, M as matrix files here");

  CLI::App* check_cmd = app.add_subcommand("check", "Impulse controllability, stabilizability, consistency");
  add_common(check_cmd, o);
  check_cmd->add_option("--z", o.z, "Initial value Ex(0), comma separated");

  CLI::App* finite_cmd = app.add_subcommand("lq-finite", "Finite-horizon LQ problem");
  add_common(finite_cmd, o);
  finite_cmd->add_option("--z", o.z, "Initial value Ex(0), comma separated (overrides the file)");
  finite_cmd->add_option("--t1", o.t1, "Horizon (overrides the file)")->check(CLI::PositiveNumber);
  finite_cmd->add_option("--steps", o.steps, "Riccati integration steps (default max(2000, 1000 t1))")
      ->check(CLI::Range(Index{100}, Index{100000000}));
  finite_cmd->add_option("--out-dir", o.out_dir, "Write cost, P(t1), gains and trajectory.csv here");

  CLI::App* infinite_cmd = app.add_subcommand("lq-infinite", "Infinite-horizon LQ problem");
  add_common(infinite_cmd, o);
  infinite_cmd->add_option("--z", o.z, "Initial value Ex(0), comma separated (overrides the file)");
  infinite_cmd->add_option("--horizon", o.horizon, "Simulation horizon of the returned trajectory")
      ->check(CLI::PositiveNumber);
  infinite_cmd->add_option("--steps", o.steps, "Steps of the returned trajectory")
      ->check(CLI::Range(Index{1}, Index{100000000}));
  infinite_cmd->add_option("--out-dir", o.out_dir, "Write cost, P, gains and trajectory.csv here");

  CLI::App* simulate_cmd = app.add_subcommand("simulate", "Free response (g = 0) of the DAE from Ex(0) = z");
  add_common(simulate_cmd, o);
  simulate_cmd->add_option("--z", o.z, "Initial value Ex(0), comma separated (overrides the file)");
  simulate_cmd->add_option("--horizon", o.horizon, "End time (default t1 of the file, else 1)")
      ->check(CLI::PositiveNumber);
  simulate_cmd->add_option("--steps", o.steps, "Grid steps (default 1000)")
      ->check(CLI::Range(Index{2}, Index{100000000}));
  simulate_cmd->add_option("--out-dir", o.out_dir, "Write trajectory.csv here instead of standard output");

  CLI::App* heat_cmd = app.add_subcommand("heat-demo", "Heat-equation benchmark: cost table, error curves, matrices");
  HeatConfig& h = o.heat;
  heat_cmd->add_option("--N", h.N, "Galerkin dimension")->capture_default_str()->check(CLI::PositiveNumber);
  heat_cmd->add_option("--Nu", h.N_u, "Number of sine actuators")->capture_default_str()->check(CLI::PositiveNumber);
  heat_cmd->add_option("--mu", h.mu, "Weight of the error variables")->capture_default_str();
  heat_cmd->add_option("--c", h.c, "Diffusion coefficient, V_t = c^2 V_xx")->capture_default_str();
  heat_cmd->add_option("--lambda", h.lambda, "Initial amplitude")->capture_default_str();
  heat_cmd->add_option("--mode", h.mode, "Initial sine mode")->capture_default_str()->check(CLI::PositiveNumber);
  heat_cmd->add_option("--T", h.T, "Simulation horizon")->capture_default_str();
  heat_cmd->add_option("--dt", h.dt, "Simulation step")->capture_default_str();
  heat_cmd->add_option("--quad-order", h.quad_order, "Gauss nodes for the sine projections (0: N + 2)")
      ->capture_default_str();
  heat_cmd->add_option("--basis", o.heat_basis, "Galerkin basis: vanishing (P_{k+1} - P_{k-1}) or adjacent")
      ->capture_default_str()
      ->check(CLI::IsMember({"vanishing", "adjacent"}));
  heat_cmd->add_option("--gram", o.heat_gram, "Gram matrix: exact or closed-form (pentadiagonal formula)")
      ->capture_default_str()
      ->check(CLI::IsMember({"exact", "closed-form"}));
  heat_cmd->add_option("--stiffness", o.heat_stiffness, "Stiffness scale: c2 (-2c^2(2i+1)) or c (-2c(2i+1))")
      ->capture_default_str()
      ->check(CLI::IsMember({"c2", "c"}));
  heat_cmd->add_option("--naive", o.heat_naive, "Baseline dynamics: gram (Mhat^-1) or mass (M_N^-1)")
      ->capture_default_str()
      ->check(CLI::IsMember({"gram", "mass"}));
  heat_cmd->add_option("--out-dir", o.out_dir, "Output directory (default: current directory)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  }

  const std::pair<CLI::App*, std::function<int()>> table[] = {
      {associate_cmd, [&] { return cmd_associate(o, out); }},
      {check_cmd, [&] { return cmd_check(o, out); }},
      {finite_cmd, [&] { return cmd_lq_finite(o, out); }},
      {infinite_cmd, [&] { return cmd_lq_infinite(o, out); }},
      {simulate_cmd, [&] { return cmd_simulate(o, out); }},
      {heat_cmd, [&] { return cmd_heat_demo(o, out); }},
  };
  try {
    for (const auto& [cmd, fn] : table) {
      if (cmd->parsed()) return fn();
    }
    return kInputError;
  } catch (const NotStabilizable& e) {
    err << "error: " << e.what() << '\n';
    return kNotStabilizable;
  } catch (const InconsistentInitialState& e) {
    err << "error: " << e.what() << '\n';
    return kInconsistentInitial;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const ShapeError& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const GridError& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kNumericalFailure;
  }
}

}  // namespace daelti::cli
