#ifndef BIOT_VERIFICATION_HPP
#define BIOT_VERIFICATION_HPP

#include <array>
#include <cstdint>
#include <vector>

#include "biot/counterexample.hpp"
#include "biot/norms.hpp"
#include "biot/solver.hpp"

namespace biot {

// Extreme generalized eigenvalues of the discrete divergence inf-sup
// problem: c_h <= mu |D* q|_{U*}^2 / |q|^2 <= C_h on the total-pressure
// space. Independent of mu by construction.
struct DivInfSup {
  double c_h = 0.0;
  double C_h = 0.0;
};

DivInfSup div_infsup_constants(const OperatorSet& ops);

// Evaluation of the explicit inf-sup test function on one trial
// trajectory: the quotient b(y1, y2)/|y2|_2 and its ratio against the
// augmented trial norm.
struct InfSupQuotient {
  double b_value = 0.0;
  double y2_norm = 0.0;
  double quotient = 0.0;
  double kappa0 = 0.0;   // quotient / augmented trial norm
  double s_bar = 0.0;    // time where the sampled dual norm of m peaks
  bool degenerate = false;
};

InfSupQuotient infsup_lower_bound(const FourFieldTrajectory& traj, const OperatorSet& ops,
                                  const DivInfSup& constants);

struct NondegeneracyReport {
  bool nonsingular = false;
  double smallest_pivot = 0.0;
};

// Factorizes the per-step four-field matrix with full pivoting; with
// break_mean_multiplier the pressure zero-mean multiplier is dropped to
// reproduce the constant-pressure kernel.
NondegeneracyReport check_nondegeneracy(const OperatorSet& ops, double tau,
                                        bool break_mean_multiplier = false);

struct StabilityEntry {
  MaterialParams params;
  double lhs_sq = 0.0;
  double rhs_sq = 0.0;
  double ratio = 0.0;
  NormReport trial;
  DataNormReport data;
};

StabilityEntry stability_ratio(const FourFieldTrajectory& traj, const DiscreteLoads& loads,
                               const OperatorSet& ops);

struct PressureControl {
  double numerator = 0.0;     // alpha^2/(mu+lambda) |P_D p|^2 + sigma |p|^2, time-integrated
  double gamma_lower = 0.0;   // gamma^{-1} int |p|^2 (must stay below numerator)
  double ratio = 0.0;         // numerator / ((1+T) trial^2)
  bool degenerate = false;
};

PressureControl check_L2L2_pressure(const FourFieldTrajectory& traj, const OperatorSet& ops);

// Pressure history projected onto polynomials in time of degree r <= 3,
// orthogonally with respect to the energy inner product in space and the
// exact integral in time. Coefficients are for powers of t.
struct TimePolynomial {
  std::vector<Eigen::VectorXd> coeff;
  double T = 0.0;
  Eigen::VectorXd eval(double t) const;
};

TimePolynomial project_time_polynomial(const std::vector<Eigen::VectorXd>& p_steps, double tau,
                                       int r);

double check_Pr_bound(const FourFieldTrajectory& traj, const OperatorSet& ops, int r);

double check_antiderivative(const FourFieldTrajectory& traj, const OperatorSet& ops);

// Smooth randomized load fields from low-order trigonometric combinations;
// the initial fluid content is built from zero-mean modes so every space
// configuration accepts it.
LoadData random_smooth_loads(std::uint32_t seed);

struct ParameterGrid {
  std::vector<double> lambdas{1.0, 1e2, 1e4, 1e8};
  std::vector<double> sigmas{0.0, 1e-8, 1e-4, 1.0};
  std::vector<double> kappas{1e-8, 1.0};
  std::vector<double> alphas{0.1, 1.0};
  double mu = 1.0;
  double T = 1.0;

  std::vector<MaterialParams> points() const;
};

struct SweepPointResult {
  MaterialParams params;
  StabilityEntry stability;
  InfSupQuotient infsup;
  NondegeneracyReport nondegeneracy;
  PressureControl pressure;
  std::array<double, 3> pr_ratio{0.0, 0.0, 0.0};
  double antiderivative_ratio = 0.0;
};

struct SweepResult {
  std::vector<SweepPointResult> points;
  double ratio_min = 0.0;
  double ratio_max = 0.0;
};

SweepResult run_stability_sweep(const ParameterGrid& grid, const Mesh& mesh,
                                const BoundaryConfig& bc, int n_steps, std::uint32_t seed,
                                bool parallel, double tol = 1e-10);

}  // namespace biot

#endif
