#include "biot/solver.hpp"

#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace biot {

namespace {

struct Layout {
  int nu = 0, n1 = 0, npf = 0;
  int off_u = 0, off_ptot = 0, off_p = 0, off_m = 0;
  int col_rho = -1, col_eta_D = -1, col_eta_Pbar = -1, col_eta_P = -1;
  int size = 0;
};

Layout make_layout(const OperatorSet& ops, bool include_p_mean_multiplier) {
  Layout lay;
  lay.nu = static_cast<int>(ops.elasticity.rows());
  lay.n1 = static_cast<int>(ops.mass.rows());
  lay.npf = static_cast<int>(ops.pressure_stiffness.rows());
  lay.off_u = 0;
  lay.off_ptot = lay.nu;
  lay.off_p = lay.nu + lay.n1;
  lay.off_m = lay.nu + lay.n1 + lay.npf;
  int next = lay.off_m + lay.n1;
  if (ops.spaces.u_quotient_rigid_motions) {
    lay.col_rho = next;
    next += 3;
  }
  if (ops.spaces.D_zero_mean) lay.col_eta_D = next++;
  if (ops.spaces.Pbar_zero_mean) lay.col_eta_Pbar = next++;
  if (ops.spaces.p_zero_mean && include_p_mean_multiplier) lay.col_eta_P = next++;
  lay.size = next;
  return lay;
}

void add_block(std::vector<Triplet>& out, const SpMat& block, int row_off, int col_off,
               double scale) {
  for (int k = 0; k < block.outerSize(); ++k)
    for (SpMat::InnerIterator it(block, k); it; ++it)
      out.emplace_back(row_off + static_cast<int>(it.row()), col_off + static_cast<int>(it.col()),
                       scale * it.value());
}

void add_block_transposed(std::vector<Triplet>& out, const SpMat& block, int row_off, int col_off,
                          double scale) {
  for (int k = 0; k < block.outerSize(); ++k)
    for (SpMat::InnerIterator it(block, k); it; ++it)
      out.emplace_back(row_off + static_cast<int>(it.col()), col_off + static_cast<int>(it.row()),
                       scale * it.value());
}

void add_column_pair(std::vector<Triplet>& out, const Eigen::VectorXd& v, int row_off, int col,
                     int constraint_row, int col_off_for_row) {
  for (int i = 0; i < v.size(); ++i) {
    if (v[i] == 0.0) continue;
    out.emplace_back(row_off + i, col, v[i]);
    out.emplace_back(constraint_row, col_off_for_row + i, v[i]);
  }
}

}  // namespace

SpMat TimeStepper::build_step_matrix(const OperatorSet& ops, double tau,
                                     bool include_p_mean_multiplier) {
  const MaterialParams& par = ops.params;
  const Layout lay = make_layout(ops, include_p_mean_multiplier);
  std::vector<Triplet> trip;

  // Momentum row: E u + D* p_tot.
  add_block(trip, ops.elasticity, lay.off_u, lay.off_u, 1.0);
  add_block_transposed(trip, ops.divergence, lay.off_u, lay.off_ptot, 1.0);

  // Total-pressure row: lambda D u - p_tot - alpha p.
  add_block(trip, ops.divergence, lay.off_ptot, lay.off_u, par.lambda);
  add_block(trip, ops.mass, lay.off_ptot, lay.off_ptot, -1.0);
  add_block_transposed(trip, ops.mass_pfull, lay.off_ptot, lay.off_p, -par.alpha);

  // Fluid-content row: alpha D u + sigma p - m.
  add_block(trip, ops.divergence, lay.off_m, lay.off_u, par.alpha);
  if (par.sigma != 0.0)
    add_block_transposed(trip, ops.mass_pfull, lay.off_m, lay.off_p, par.sigma);
  add_block(trip, ops.mass, lay.off_m, lay.off_m, -1.0);

  // Evolution row (scaled by tau): M m + tau L p.
  add_block(trip, ops.pressure_stiffness, lay.off_p, lay.off_p, tau);
  add_block(trip, ops.mass_pfull, lay.off_p, lay.off_m, 1.0);

  // Constraint multipliers + constraint rows.
  if (lay.col_rho >= 0) {
    for (int j = 0; j < 3; ++j) {
      const Eigen::VectorXd w = ops.u_mass * ops.rigid_modes[j];
      add_column_pair(trip, w, lay.off_u, lay.col_rho + j, lay.col_rho + j, lay.off_u);
    }
  }
  if (lay.col_eta_D >= 0)
    add_column_pair(trip, ops.mean_vec, lay.off_ptot, lay.col_eta_D, lay.col_eta_D, lay.off_ptot);
  if (lay.col_eta_Pbar >= 0)
    add_column_pair(trip, ops.mean_vec, lay.off_m, lay.col_eta_Pbar, lay.col_eta_Pbar, lay.off_m);
  if (lay.col_eta_P >= 0) {
    const Eigen::VectorXd c_free = ops.dofmap().restrict_p(ops.mean_vec);
    add_column_pair(trip, c_free, lay.off_p, lay.col_eta_P, lay.col_eta_P, lay.off_p);
  }

  SpMat K(lay.size, lay.size);
  K.setFromTriplets(trip.begin(), trip.end());
  return K;
}

TimeStepper::TimeStepper(const OperatorSet& ops, double tau, double tol)
    : ops_(ops), tau_(tau), tol_(tol) {
  if (!(tau > 0.0)) throw std::invalid_argument("TimeStepper: tau must be > 0");
  matrix_ = build_step_matrix(ops, tau);
  size_ = static_cast<int>(matrix_.rows());
  factor_ = std::make_unique<SaddleFactor>(matrix_);
}

StepSolution TimeStepper::step(const Eigen::VectorXd& prev_m, const LoadVectors& loads,
                               const Eigen::VectorXd* lptot, const Eigen::VectorXd* lm) const {
  const Layout lay = make_layout(ops_, true);
  if (prev_m.size() != lay.n1) throw std::invalid_argument("step: prev_m size mismatch");
  if (ops_.spaces.Pbar_zero_mean &&
      std::abs(ops_.mean_vec.dot(prev_m)) > 1e-8 * (1.0 + prev_m.norm()))
    throw std::invalid_argument("step: prev_m violates the zero-mean constraint");

  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(lay.size);
  rhs.segment(lay.off_u, lay.nu) = loads.lu;
  if (lptot) rhs.segment(lay.off_ptot, lay.n1) = *lptot;
  if (lm) rhs.segment(lay.off_m, lay.n1) = *lm;
  rhs.segment(lay.off_p, lay.npf) = tau_ * loads.lp + ops_.mass_pfull * prev_m;

  const Eigen::VectorXd x = factor_->solve(rhs, tol_);
  StepSolution sol;
  sol.u = x.segment(lay.off_u, lay.nu);
  sol.p_tot = x.segment(lay.off_ptot, lay.n1);
  sol.p = x.segment(lay.off_p, lay.npf);
  sol.m = x.segment(lay.off_m, lay.n1);
  return sol;
}

StepSolution backward_euler_step(const Eigen::VectorXd& prev_m, double tau,
                                 const LoadVectors& loads, const OperatorSet& ops, double tol) {
  TimeStepper stepper(ops, tau, tol);
  return stepper.step(prev_m, loads);
}

DiscreteLoads realize_loads(const LoadData& loads, const Mesh& mesh, const OperatorSet& ops,
                            const BoundaryConfig& bc, int n_steps) {
  if (n_steps < 1) throw std::invalid_argument("realize_loads: need at least one step");
  DiscreteLoads out;
  out.tau = ops.params.T / n_steps;

  if (loads.preassembled) {
    const auto& pre = *loads.preassembled;
    if (static_cast<int>(pre.step.size()) != n_steps)
      throw std::invalid_argument("realize_loads: preassembled step count mismatch");
    out.step = pre.step;
    out.lptot = pre.lptot;
    out.lm = pre.lm;
    out.m0 = pre.m0;
  } else {
    FieldData data;
    data.f_u = loads.f_u;
    data.f_p = loads.f_p;
    data.g_u = loads.g_u;
    data.g_p = loads.g_p;
    out.step.reserve(n_steps);
    for (int k = 1; k <= n_steps; ++k) {
      const double t_mid = (k - 0.5) * out.tau;
      out.step.push_back(assemble_loads(mesh, ops.dofmap(), bc, data, t_mid));
    }
    if (loads.ell0) {
      out.m0 = project_scalar_field(mesh, ops, loads.ell0);
    } else {
      out.m0 = Eigen::VectorXd::Zero(ops.mass.rows());
    }
  }

  if (ops.spaces.Pbar_zero_mean) {
    const double mean = ops.mean_vec.dot(out.m0);
    if (std::abs(mean) > 1e-8 * (1.0 + out.m0.norm()))
      throw std::invalid_argument("realize_loads: initial fluid content must have zero mean");
    out.m0 = apply_PPbar(out.m0, ops.spaces, ops);
  }
  return out;
}

FourFieldTrajectory run_trajectory(const DiscreteLoads& loads, int n_steps,
                                   const OperatorSet& ops, double tol) {
  if (n_steps < 1) throw std::invalid_argument("run_trajectory: need at least one step");
  if (static_cast<int>(loads.step.size()) != n_steps)
    throw std::invalid_argument("run_trajectory: load count does not match step count");

  FourFieldTrajectory traj;
  traj.tau = loads.tau;
  traj.n_steps = n_steps;
  traj.m.push_back(loads.m0);

  TimeStepper stepper(ops, loads.tau, tol);
  for (int k = 0; k < n_steps; ++k) {
    const Eigen::VectorXd* lptot =
        (k < static_cast<int>(loads.lptot.size())) ? &loads.lptot[k] : nullptr;
    const Eigen::VectorXd* lm = (k < static_cast<int>(loads.lm.size())) ? &loads.lm[k] : nullptr;
    StepSolution sol = stepper.step(traj.m.back(), loads.step[k], lptot, lm);
    traj.u.push_back(std::move(sol.u));
    traj.p_tot.push_back(std::move(sol.p_tot));
    traj.p.push_back(std::move(sol.p));
    traj.m.push_back(std::move(sol.m));
  }
  return traj;
}

void export_trajectory(const FourFieldTrajectory& traj, const OperatorSet& ops,
                       const std::string& directory, const std::string& prefix) {
  namespace fs = std::filesystem;
  fs::create_directories(directory);
  auto open = [&](const std::string& field) {
    std::ofstream out(fs::path(directory) / (prefix + "_" + field + ".csv"));
    out.precision(17);
    out << "time,dof,value\n";
    return out;
  };

  auto dump = [&](const std::string& name, const std::vector<Eigen::VectorXd>& values,
                  bool nodal) {
    std::ofstream out = open(name);
    for (size_t k = 0; k < values.size(); ++k) {
      const double t = nodal ? traj.tau * k : traj.tau * (k + 1);
      for (int i = 0; i < values[k].size(); ++i)
        out << t << "," << i << "," << values[k][i] << "\n";
    }
  };
  dump("u", traj.u, false);
  dump("p_tot", traj.p_tot, false);
  dump("p", traj.p, false);
  dump("m", traj.m, true);

  std::ofstream man(fs::path(directory) / (prefix + "_manifest.txt"));
  man.precision(17);
  const MaterialParams& par = ops.params;
  man << "vertices " << ops.mesh->n_vertices() << "\n"
      << "triangles " << ops.mesh->n_triangles() << "\n"
      << "mu " << par.mu << "\nlambda " << par.lambda << "\nalpha " << par.alpha << "\nsigma "
      << par.sigma << "\nkappa " << par.kappa << "\nT " << par.T << "\n"
      << "tau " << traj.tau << "\nsteps " << traj.n_steps << "\n"
      << "u_quotient " << ops.spaces.u_quotient_rigid_motions << "\n"
      << "p_zero_mean " << ops.spaces.p_zero_mean << "\n"
      << "D_zero_mean " << ops.spaces.D_zero_mean << "\n"
      << "Pbar_zero_mean " << ops.spaces.Pbar_zero_mean << "\n";
}

}  // namespace biot
