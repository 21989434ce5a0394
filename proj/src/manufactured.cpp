#include "biot/manufactured.hpp"

#include <cmath>

#include "biot/evaluate.hpp"

namespace biot {

namespace {
const double PI = M_PI;

Eigen::Vector2d U_profile(const Eigen::Vector2d& x) {
  return {std::sin(PI * x.x()) * std::sin(PI * x.y()),
          std::sin(PI * x.x()) * std::sin(2 * PI * x.y())};
}

Eigen::Matrix2d gradU_profile(const Eigen::Vector2d& x) {
  Eigen::Matrix2d G;
  const double sx = std::sin(PI * x.x()), cx = std::cos(PI * x.x());
  const double sy = std::sin(PI * x.y()), cy = std::cos(PI * x.y());
  const double s2y = std::sin(2 * PI * x.y()), c2y = std::cos(2 * PI * x.y());
  G(0, 0) = PI * cx * sy;
  G(0, 1) = PI * sx * cy;
  G(1, 0) = PI * cx * s2y;
  G(1, 1) = 2 * PI * sx * c2y;
  return G;
}

double divU_profile(const Eigen::Vector2d& x) {
  return PI * std::cos(PI * x.x()) * std::sin(PI * x.y()) +
         2 * PI * std::sin(PI * x.x()) * std::cos(2 * PI * x.y());
}

// Gradient of div U, needed for the momentum load.
Eigen::Vector2d grad_divU_profile(const Eigen::Vector2d& x) {
  const double sx = std::sin(PI * x.x()), cx = std::cos(PI * x.x());
  const double sy = std::sin(PI * x.y()), cy = std::cos(PI * x.y());
  const double s2y = std::sin(2 * PI * x.y()), c2y = std::cos(2 * PI * x.y());
  return {-PI * PI * sx * sy + 2 * PI * PI * cx * c2y,
          PI * PI * cx * cy - 4 * PI * PI * sx * s2y};
}

Eigen::Vector2d laplaceU_profile(const Eigen::Vector2d& x) {
  const Eigen::Vector2d U = U_profile(x);
  return {-2 * PI * PI * U.x(), -5 * PI * PI * U.y()};
}

double P_profile(const Eigen::Vector2d& x) {
  return std::cos(PI * x.x()) * std::cos(PI * x.y());
}

Eigen::Vector2d gradP_profile(const Eigen::Vector2d& x) {
  return {-PI * std::sin(PI * x.x()) * std::cos(PI * x.y()),
          -PI * std::cos(PI * x.x()) * std::sin(PI * x.y())};
}

}  // namespace

double ManufacturedCase::a(double t) const {
  return linear_in_time ? 1.0 + 0.5 * t : 1.0 + 0.5 * std::sin(t);
}
double ManufacturedCase::a_dot(double t) const {
  return linear_in_time ? 0.5 : 0.5 * std::cos(t);
}
double ManufacturedCase::b(double t) const {
  return linear_in_time ? 1.0 - t / 3.0 : std::cos(t);
}
double ManufacturedCase::b_dot(double t) const {
  return linear_in_time ? -1.0 / 3.0 : -std::sin(t);
}

Eigen::Vector2d ManufacturedCase::u_exact(const Eigen::Vector2d& x, double t) const {
  return a(t) * U_profile(x);
}
Eigen::Matrix2d ManufacturedCase::grad_u_exact(const Eigen::Vector2d& x, double t) const {
  return a(t) * gradU_profile(x);
}
double ManufacturedCase::p_exact(const Eigen::Vector2d& x, double t) const {
  return b(t) * P_profile(x);
}
Eigen::Vector2d ManufacturedCase::grad_p_exact(const Eigen::Vector2d& x, double t) const {
  return b(t) * gradP_profile(x);
}
double ManufacturedCase::div_u_exact(const Eigen::Vector2d& x, double t) const {
  return a(t) * divU_profile(x);
}
double ManufacturedCase::m_exact(const Eigen::Vector2d& x, double t) const {
  return params.alpha * div_u_exact(x, t) + params.sigma * p_exact(x, t);
}
double ManufacturedCase::p_tot_exact(const Eigen::Vector2d& x, double t) const {
  return params.lambda * div_u_exact(x, t) - params.alpha * p_exact(x, t);
}

LoadData ManufacturedCase::loads() const {
  const ManufacturedCase self = *this;
  LoadData loads;
  loads.f_u = [self](const Eigen::Vector2d& x, double t) {
    const MaterialParams& par = self.params;
    const Eigen::Vector2d elastic =
        -par.mu * laplaceU_profile(x) - (par.mu + par.lambda) * grad_divU_profile(x);
    return Eigen::Vector2d(self.a(t) * elastic + par.alpha * self.b(t) * gradP_profile(x));
  };
  loads.f_p = [self](const Eigen::Vector2d& x, double t) {
    const MaterialParams& par = self.params;
    return par.alpha * self.a_dot(t) * divU_profile(x) + par.sigma * self.b_dot(t) * P_profile(x) +
           par.kappa * 2 * PI * PI * self.b(t) * P_profile(x);
  };
  loads.ell0 = [self](const Eigen::Vector2d& x) { return self.m_exact(x, 0.0); };
  return loads;
}

ManufacturedCase manufactured_case(double sigma, bool linear_in_time) {
  ManufacturedCase mcase;
  mcase.params.mu = 1.0;
  mcase.params.lambda = 1.0;
  mcase.params.alpha = 1.0;
  mcase.params.sigma = sigma;
  mcase.params.kappa = 1.0;
  mcase.params.T = 1.0;
  mcase.linear_in_time = linear_in_time;
  for (const char* side : {"left", "right", "bottom", "top"})
    mcase.bc.segments[side] = SegmentBc{BcKind::Essential, BcKind::Natural};
  return mcase;
}

ConvergenceErrors manufactured_errors(const ManufacturedCase& mcase, int n, int n_steps,
                                      double tol) {
  const Mesh mesh = unit_square_mesh(n);
  const SpaceConfig spaces = select_spaces(mcase.bc, mcase.params);
  const OperatorSet ops = assemble_operators(mesh, mcase.params, spaces, mcase.bc);
  const DiscreteLoads discrete = realize_loads(mcase.loads(), mesh, ops, mcase.bc, n_steps);
  const FourFieldTrajectory traj = run_trajectory(discrete, n_steps, ops, tol);

  // The piecewise-constant fields represent the interval they live on;
  // compare them at the midpoint of the last interval.
  const double t_rep = (n_steps - 0.5) * traj.tau;
  const double t_end = n_steps * traj.tau;

  ConvergenceErrors err;
  err.u_energy = std::sqrt(u_energy_error_sq(
      mesh, ops.dofmap(), mcase.params.mu, traj.u.back(),
      [&](const Eigen::Vector2d& x) { return mcase.grad_u_exact(x, t_rep); }));
  err.p_energy = std::sqrt(p_energy_error_sq(
      mesh, ops.dofmap(), mcase.params.kappa, traj.p.back(),
      [&](const Eigen::Vector2d& x) { return mcase.grad_p_exact(x, t_rep); }));
  err.m_l2 = std::sqrt(scalar_l2_error_sq(
      mesh, traj.m.back(), [&](const Eigen::Vector2d& x) { return mcase.m_exact(x, t_end); }));
  return err;
}

}  // namespace biot
