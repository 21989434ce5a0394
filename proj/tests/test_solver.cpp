#include "doctest.h"

#include <utility>

#include <Eigen/Dense>

#include "biot/norms.hpp"
#include "biot/solver.hpp"

using namespace biot;

namespace {

BoundaryConfig uniform_bc(BcKind u, BcKind p) {
  BoundaryConfig bc;
  for (const char* side : {"left", "right", "bottom", "top"}) bc.segments[side] = {u, p};
  return bc;
}

struct Setup {
  Mesh mesh;
  BoundaryConfig bc;
  MaterialParams params;
  SpaceConfig spaces;
  OperatorSet ops;
};

Setup make_setup(int n, const BoundaryConfig& bc, const MaterialParams& params) {
  Setup s{unit_square_mesh(n), bc, params, select_spaces(bc, params), {}};
  s.ops = assemble_operators(s.mesh, params, s.spaces, bc);
  return s;
}

LoadData smooth_loads() {
  LoadData loads;
  loads.f_u = [](const Eigen::Vector2d& x, double t) {
    return Eigen::Vector2d(std::sin(M_PI * x.x()) * (1.0 + 0.3 * t),
                           std::cos(M_PI * x.y()) * (1.0 - 0.2 * t));
  };
  loads.f_p = [](const Eigen::Vector2d& x, double t) {
    return std::cos(M_PI * x.x()) * std::cos(M_PI * x.y()) * (1.0 + t) + 0.5 * std::sin(t);
  };
  loads.ell0 = [](const Eigen::Vector2d& x) {
    return std::cos(M_PI * x.x()) + 0.5 * std::cos(M_PI * x.y());
  };
  return loads;
}

// Dense assembly of the per-step equations straight from the operator
// blocks, used as an independent check of the solver path.
struct DenseStep {
  Eigen::MatrixXd K;
  int nu, n1, npf, size;
  int off_u, off_ptot, off_p, off_m;

  DenseStep(const OperatorSet& ops, double tau, bool stationary) {
    const MaterialParams& par = ops.params;
    nu = ops.elasticity.rows();
    n1 = ops.mass.rows();
    npf = ops.pressure_stiffness.rows();
    off_u = 0;
    off_ptot = nu;
    off_p = nu + n1;
    off_m = nu + n1 + npf;
    int next = off_m + n1;
    const int col_rho = ops.spaces.u_quotient_rigid_motions ? std::exchange(next, next + 3) : -1;
    const int col_eta_D = ops.spaces.D_zero_mean ? next++ : -1;
    const int col_eta_Pbar = ops.spaces.Pbar_zero_mean ? next++ : -1;
    const int col_eta_P = ops.spaces.p_zero_mean ? next++ : -1;
    size = next;

    const Eigen::MatrixXd E(ops.elasticity), B(ops.divergence), L(ops.pressure_stiffness),
        M(ops.mass), Mpf(ops.mass_pfull);
    K = Eigen::MatrixXd::Zero(size, size);
    K.block(off_u, off_u, nu, nu) = E;
    K.block(off_u, off_ptot, nu, n1) = B.transpose();
    K.block(off_ptot, off_u, n1, nu) = par.lambda * B;
    K.block(off_ptot, off_ptot, n1, n1) = -M;
    K.block(off_ptot, off_p, n1, npf) = -par.alpha * Mpf.transpose();
    K.block(off_m, off_u, n1, nu) = par.alpha * B;
    K.block(off_m, off_p, n1, npf) = par.sigma * Mpf.transpose();
    K.block(off_m, off_m, n1, n1) = -M;
    if (stationary) {
      // No time derivative: the evolution row reads L p = l_p.
      K.block(off_p, off_p, npf, npf) = L;
    } else {
      K.block(off_p, off_p, npf, npf) = tau * L;
      K.block(off_p, off_m, npf, n1) = Mpf;
    }
    if (col_rho >= 0)
      for (int j = 0; j < 3; ++j) {
        const Eigen::VectorXd w = ops.u_mass * ops.rigid_modes[j];
        K.block(off_u, col_rho + j, nu, 1) = w;
        K.block(col_rho + j, off_u, 1, nu) = w.transpose();
      }
    if (col_eta_D >= 0) {
      K.block(off_ptot, col_eta_D, n1, 1) = ops.mean_vec;
      K.block(col_eta_D, off_ptot, 1, n1) = ops.mean_vec.transpose();
    }
    if (col_eta_Pbar >= 0) {
      K.block(off_m, col_eta_Pbar, n1, 1) = ops.mean_vec;
      K.block(col_eta_Pbar, off_m, 1, n1) = ops.mean_vec.transpose();
    }
    if (col_eta_P >= 0) {
      const Eigen::VectorXd c_free = ops.dofmap().restrict_p(ops.mean_vec);
      K.block(off_p, col_eta_P, npf, 1) = c_free;
      K.block(col_eta_P, off_p, 1, npf) = c_free.transpose();
    }
  }
};

}  // namespace

TEST_SUITE("solver") {

TEST_CASE("zero data produces the zero trajectory") {
  MaterialParams params;
  params.sigma = 1.0;
  const Setup s = make_setup(3, uniform_bc(BcKind::Essential, BcKind::Natural), params);
  const DiscreteLoads loads = realize_loads(LoadData{}, s.mesh, s.ops, s.bc, 4);
  const FourFieldTrajectory traj = run_trajectory(loads, 4, s.ops);
  for (int k = 0; k < 4; ++k) {
    CHECK(traj.u[k].norm() == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(traj.p[k].norm() == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(traj.p_tot[k].norm() == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(traj.m[k + 1].norm() == doctest::Approx(0.0).epsilon(1e-14));
  }
}

TEST_CASE("solved steps satisfy the algebraic rows and the constraints") {
  MaterialParams params;
  params.sigma = 0.0;  // fully constrained configuration
  const Setup s = make_setup(4, uniform_bc(BcKind::Essential, BcKind::Natural), params);
  const DiscreteLoads loads = realize_loads(smooth_loads(), s.mesh, s.ops, s.bc, 5);
  const FourFieldTrajectory traj = run_trajectory(loads, 5, s.ops);

  const double scale = traj.p_tot[2].norm() + traj.m[3].norm() + 1.0;
  CHECK(std::abs(s.ops.mean_vec.dot(traj.p_tot[2])) < 1e-10 * scale);
  CHECK(std::abs(s.ops.mean_vec.dot(traj.m[3])) < 1e-10 * scale);
  CHECK(std::abs(s.ops.dofmap().restrict_p(s.ops.mean_vec).dot(traj.p[2])) < 1e-10 * scale);

  // Algebraic rows, tested against the constrained spaces: residuals are
  // pure constant-direction vectors.
  for (int k = 0; k < 5; ++k) {
    const Eigen::VectorXd p_full = s.ops.dofmap().embed_p(traj.p[k]);
    Eigen::VectorXd res2 = params.lambda * (s.ops.divergence * traj.u[k]) -
                           s.ops.mass * traj.p_tot[k] - params.alpha * (s.ops.mass * p_full);
    res2 -= (res2.sum() / s.ops.mean_vec.sum()) * s.ops.mean_vec;  // quotient the constants
    CHECK(res2.cwiseAbs().maxCoeff() < 1e-10);

    Eigen::VectorXd res3 = params.alpha * (s.ops.divergence * traj.u[k]) +
                           params.sigma * (s.ops.mass * p_full) - s.ops.mass * traj.m[k + 1];
    res3 -= (res3.sum() / s.ops.mean_vec.sum()) * s.ops.mean_vec;
    CHECK(res3.cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("vanishing coupling reduces the pressure to a backward Euler heat equation") {
  MaterialParams params;
  params.alpha = 1e-6;
  params.sigma = 1.0;
  const int n_steps = 8;
  const Setup s = make_setup(4, uniform_bc(BcKind::Essential, BcKind::Essential), params);

  LoadData loads;
  loads.f_p = [](const Eigen::Vector2d& x, double t) {
    return std::sin(M_PI * x.x()) * std::sin(M_PI * x.y()) * (1.0 + 0.5 * t);
  };
  const DiscreteLoads discrete = realize_loads(loads, s.mesh, s.ops, s.bc, n_steps);
  const FourFieldTrajectory traj = run_trajectory(discrete, n_steps, s.ops);

  // Standalone heat stepper: (sigma M / tau + L) p_k = l_k + sigma M p_{k-1} / tau.
  const double tau = discrete.tau;
  const Eigen::MatrixXd Mpp(s.ops.mass_pp), L(s.ops.pressure_stiffness);
  const Eigen::MatrixXd A = params.sigma / tau * Mpp + L;
  Eigen::VectorXd p_heat = Eigen::VectorXd::Zero(s.ops.pressure_stiffness.rows());
  for (int k = 0; k < n_steps; ++k) {
    p_heat = A.llt().solve(discrete.step[k].lp + params.sigma / tau * (Mpp * p_heat));
    CHECK((traj.p[k] - p_heat).norm() <= 1e-10 * std::max(1.0, p_heat.norm()));
  }
}

TEST_CASE("one sigma=0 step matches a direct monolithic solve of the stationary system") {
  MaterialParams params;
  params.sigma = 0.0;
  params.lambda = 2.0;
  params.alpha = 0.8;
  const Setup s = make_setup(3, uniform_bc(BcKind::Essential, BcKind::Natural), params);
  const int n_steps = 1;
  const DiscreteLoads loads = realize_loads(smooth_loads(), s.mesh, s.ops, s.bc, n_steps);

  // The trajectory starts from zero fluid content.
  DiscreteLoads zeroed = loads;
  zeroed.m0.setZero();
  const FourFieldTrajectory traj = run_trajectory(zeroed, n_steps, s.ops);

  DenseStep dense(s.ops, loads.tau, false);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(dense.size);
  rhs.segment(dense.off_u, dense.nu) = loads.step[0].lu;
  rhs.segment(dense.off_p, dense.npf) = loads.tau * loads.step[0].lp;
  const Eigen::VectorXd x = Eigen::FullPivLU<Eigen::MatrixXd>(dense.K).solve(rhs);

  const double scale = 1.0 + x.cwiseAbs().maxCoeff();
  CHECK((traj.u[0] - x.segment(dense.off_u, dense.nu)).cwiseAbs().maxCoeff() < 1e-10 * scale);
  CHECK((traj.p_tot[0] - x.segment(dense.off_ptot, dense.n1)).cwiseAbs().maxCoeff() <
        1e-10 * scale);
  CHECK((traj.p[0] - x.segment(dense.off_p, dense.npf)).cwiseAbs().maxCoeff() < 1e-10 * scale);
  CHECK((traj.m[1] - x.segment(dense.off_m, dense.n1)).cwiseAbs().maxCoeff() < 1e-10 * scale);
}

TEST_CASE("trajectory scales linearly with the loads") {
  MaterialParams params;
  params.sigma = 0.5;
  const Setup s = make_setup(3, uniform_bc(BcKind::Essential, BcKind::Natural), params);
  const DiscreteLoads loads = realize_loads(smooth_loads(), s.mesh, s.ops, s.bc, 3);

  DiscreteLoads scaled = loads;
  const double factor = 3.7;
  for (auto& step : scaled.step) {
    step.lu *= factor;
    step.lp *= factor;
  }
  scaled.m0 *= factor;

  const FourFieldTrajectory base = run_trajectory(loads, 3, s.ops);
  const FourFieldTrajectory big = run_trajectory(scaled, 3, s.ops);
  for (int k = 0; k < 3; ++k) {
    CHECK((big.u[k] - factor * base.u[k]).norm() < 1e-10 * (1.0 + base.u[k].norm()));
    CHECK((big.m[k + 1] - factor * base.m[k + 1]).norm() < 1e-10 * (1.0 + base.m[k + 1].norm()));
  }
}

TEST_CASE("fluid-content mean is conserved under pure natural pressure") {
  MaterialParams params;
  params.sigma = 1.0;
  const Setup s = make_setup(4, uniform_bc(BcKind::Essential, BcKind::Natural), params);
  LoadData loads;
  loads.f_u = [](const Eigen::Vector2d& x, double t) {
    return Eigen::Vector2d(std::sin(M_PI * x.y()) * (1.0 + t), std::cos(M_PI * x.x()));
  };
  loads.ell0 = [](const Eigen::Vector2d& x) { return std::cos(M_PI * x.x()); };
  const DiscreteLoads discrete = realize_loads(loads, s.mesh, s.ops, s.bc, 6);
  const FourFieldTrajectory traj = run_trajectory(discrete, 6, s.ops);
  const double mean0 = s.ops.mean_vec.dot(traj.m[0]);
  for (int k = 1; k <= 6; ++k)
    CHECK(s.ops.mean_vec.dot(traj.m[k]) == doctest::Approx(mean0).epsilon(1e-10));
}

TEST_CASE("constant loads drive the trajectory to the stationary solution") {
  MaterialParams params;
  params.sigma = 1.0;
  params.T = 2.0;
  const Setup s = make_setup(3, uniform_bc(BcKind::Essential, BcKind::Essential), params);

  LoadData loads;
  loads.f_u = [](const Eigen::Vector2d& x, double) {
    return Eigen::Vector2d(std::sin(M_PI * x.x()), std::cos(M_PI * x.y()));
  };
  loads.f_p = [](const Eigen::Vector2d& x, double) { return x.x() * x.y(); };
  const int n_steps = 32;
  const DiscreteLoads discrete = realize_loads(loads, s.mesh, s.ops, s.bc, n_steps);
  const FourFieldTrajectory traj = run_trajectory(discrete, n_steps, s.ops);

  DenseStep dense(s.ops, discrete.tau, true);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(dense.size);
  rhs.segment(dense.off_u, dense.nu) = discrete.step.back().lu;
  rhs.segment(dense.off_p, dense.npf) = discrete.step.back().lp;
  const Eigen::VectorXd x = Eigen::FullPivLU<Eigen::MatrixXd>(dense.K).solve(rhs);

  const Eigen::VectorXd m_star = x.segment(dense.off_m, dense.n1);
  CHECK((traj.m.back() - m_star).norm() < 1e-8 * (1.0 + m_star.norm()));

  // Geometric decay of the transient in k.
  const double d8 = (traj.m[8] - m_star).norm();
  const double d16 = (traj.m[16] - m_star).norm();
  CHECK(d16 < 0.5 * d8);
}

TEST_CASE("terminal fluid content converges at first order in the step size") {
  MaterialParams params;
  params.sigma = 1.0;
  const Setup s = make_setup(3, uniform_bc(BcKind::Essential, BcKind::Essential), params);
  LoadData loads;
  loads.f_p = [](const Eigen::Vector2d& x, double t) {
    return std::cos(2.0 * t) * std::sin(M_PI * x.x()) * x.y();
  };
  loads.f_u = [](const Eigen::Vector2d& x, double t) {
    return Eigen::Vector2d(std::sin(t) * x.y(), std::cos(t) * std::sin(M_PI * x.x()));
  };

  auto terminal_m = [&](int n_steps) {
    const DiscreteLoads discrete = realize_loads(loads, s.mesh, s.ops, s.bc, n_steps);
    return run_trajectory(discrete, n_steps, s.ops).m.back();
  };
  const Eigen::VectorXd ref = terminal_m(256);
  const double e8 = (terminal_m(8) - ref).norm();
  const double e16 = (terminal_m(16) - ref).norm();
  const double rate = std::log2(e8 / e16);
  CHECK(rate > 0.7);
  CHECK(rate < 1.4);
}

TEST_CASE("singular step matrix reports through the saddle solver") {
  // tau = 0 is rejected before any factorization.
  MaterialParams params;
  params.sigma = 1.0;
  const Setup s = make_setup(2, uniform_bc(BcKind::Essential, BcKind::Natural), params);
  CHECK_THROWS_AS(TimeStepper(s.ops, 0.0), std::invalid_argument);
}

}  // TEST_SUITE
