#ifndef BIOT_MANUFACTURED_HPP
#define BIOT_MANUFACTURED_HPP

#include "biot/solver.hpp"

namespace biot {

// Smooth reference solution on the unit square with clamped displacement
// and natural pressure boundary everywhere:
//   u(x,t) = a(t) (sin(pi x) sin(pi y), sin(pi x) sin(2 pi y))
//   p(x,t) = b(t) cos(pi x) cos(pi y)
// The pressure mode has zero mean and zero conormal derivative on the
// boundary, so no boundary data appears. With linear-in-time profiles the
// backward Euler recursion reproduces the time dependence up to a decaying
// initial transient and interval-midpoint comparisons see spatial error
// only; the curved profiles exercise the first-order time error.
struct ManufacturedCase {
  MaterialParams params;
  BoundaryConfig bc;
  bool linear_in_time = true;

  LoadData loads() const;

  double a(double t) const;
  double b(double t) const;
  double a_dot(double t) const;
  double b_dot(double t) const;

  Eigen::Vector2d u_exact(const Eigen::Vector2d& x, double t) const;
  Eigen::Matrix2d grad_u_exact(const Eigen::Vector2d& x, double t) const;
  double p_exact(const Eigen::Vector2d& x, double t) const;
  Eigen::Vector2d grad_p_exact(const Eigen::Vector2d& x, double t) const;
  double div_u_exact(const Eigen::Vector2d& x, double t) const;
  double m_exact(const Eigen::Vector2d& x, double t) const;
  double p_tot_exact(const Eigen::Vector2d& x, double t) const;
};

ManufacturedCase manufactured_case(double sigma, bool linear_in_time);

struct ConvergenceErrors {
  double u_energy = 0.0;  // energy-norm displacement error at the final step
  double p_energy = 0.0;  // energy-norm pressure error
  double m_l2 = 0.0;      // L2 error of the terminal fluid content
};

// Solve on unit_square_mesh(n) with n_steps backward Euler steps and
// measure errors against the exact solution at the midpoint of the last
// interval (the interval-representative time of the piecewise-constant
// fields); the fluid content is nodal and compared at the final time.
ConvergenceErrors manufactured_errors(const ManufacturedCase& mcase, int n, int n_steps,
                                      double tol = 1e-10);

}  // namespace biot

#endif
