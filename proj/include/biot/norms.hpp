#ifndef BIOT_NORMS_HPP
#define BIOT_NORMS_HPP

#include <memory>

#include "biot/assembly.hpp"
#include "biot/solver.hpp"
#include "biot/sparse.hpp"

namespace biot {

// Term-by-term breakdown of the trial norm on a trajectory plus the
// augmented quantities entering the stability estimate. All entries are
// squared.
struct NormReport {
  double u_sq = 0.0;                // time integral of the energy norm of u
  double ptot_sq = 0.0;             // (1/mu) L2 norm of the total pressure
  double evolution_sq = 0.0;        // dual norm of dm/dt + L p
  double m0_sq = 0.0;               // dual norm of the initial fluid content
  double constraint_ptot_sq = 0.0;  // scaled residual of the total-pressure relation
  double constraint_m_sq = 0.0;     // scaled residual of the fluid-content relation

  double div_u_sq = 0.0;       // lambda-weighted L2 norm of the discrete divergence
  double sigma_p_sq = 0.0;     // sigma-weighted L2 norm of the pressure
  double m_linf_dual_sq = 0.0; // sampled sup over time of the dual norm of m

  double trial_sq() const {
    return u_sq + ptot_sq + evolution_sq + m0_sq + constraint_ptot_sq + constraint_m_sq;
  }
  // Left-hand side of the two-sided stability bound.
  double stability_lhs_sq() const {
    return u_sq + div_u_sq + ptot_sq + sigma_p_sq + evolution_sq + m_linf_dual_sq;
  }
  // Right-hand side of the inf-sup lower bound.
  double augmented_sq() const {
    return trial_sq() + m_linf_dual_sq + div_u_sq + sigma_p_sq;
  }
};

struct DataNormReport {
  double lu_sq = 0.0;
  double lp_sq = 0.0;
  double l0_sq = 0.0;
  double lptot_sq = 0.0;
  double lm_sq = 0.0;
  double total_sq() const { return lu_sq + lp_sq + l0_sq + lptot_sq + lm_sq; }
};

// Riesz solves with the energy operators, with the mean-value / rigid-motion
// constraints handled through bordered systems. One instance caches the
// factorizations for repeated use on a fixed OperatorSet.
class NormEngine {
 public:
  explicit NormEngine(const OperatorSet& ops);

  // Functionals are given by their action on the free dofs of the
  // respective space. Functionals with a component on the quotiented
  // directions (constants / rigid motions) are rejected.
  Eigen::VectorXd riesz_P(const Eigen::VectorXd& r) const;
  Eigen::VectorXd riesz_U(const Eigen::VectorXd& r) const;
  double dual_norm_P_sq(const Eigen::VectorXd& r) const;
  double dual_norm_U_sq(const Eigen::VectorXd& r) const;

  double p_energy_sq(const Eigen::VectorXd& n_free) const;   // kappa |grad n|^2
  double u_energy_sq(const Eigen::VectorXd& v_free) const;   // 2 mu |eps(v)|^2
  double scalar_l2_sq(const Eigen::VectorXd& q_full) const;  // |q|^2 over the domain
  Eigen::VectorXd mass_inverse(const Eigen::VectorXd& r_full) const;

  const OperatorSet& ops() const { return ops_; }

 private:
  const OperatorSet& ops_;
  std::unique_ptr<SpdFactor> l_plain_, e_plain_;
  std::unique_ptr<SaddleFactor> l_bordered_, e_bordered_;
  Eigen::VectorXd c_free_;
  bool p_pure_neumann_ = false;
};

// Strip the quotiented component from a pressure functional / displacement
// functional so the dual-norm preconditions hold.
Eigen::VectorXd canonicalize_pressure_functional(const Eigen::VectorXd& r, const OperatorSet& ops);
Eigen::VectorXd canonicalize_displacement_functional(const Eigen::VectorXd& r,
                                                     const OperatorSet& ops);

double dual_norm_P(const Eigen::VectorXd& r, const OperatorSet& ops);
double dual_norm_U(const Eigen::VectorXd& r, const OperatorSet& ops);

// Trial norm of a trajectory under the piecewise-in-time convention: the
// evolution residual, the initial value and the sampled sup in time use the
// piecewise-linear fluid content, while the two algebraic constraint
// residuals are evaluated at the step level where the scheme enforces them.
NormReport trial_norm(const FourFieldTrajectory& traj, const OperatorSet& ops);

DataNormReport data_norm(const DiscreteLoads& loads, const OperatorSet& ops);

}  // namespace biot

#endif
