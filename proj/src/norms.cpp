#include "biot/norms.hpp"

#include <cmath>
#include <stdexcept>

namespace biot {

namespace {

SpMat bordered_matrix(const SpMat& A, const std::vector<Eigen::VectorXd>& constraints) {
  const int n = static_cast<int>(A.rows());
  const int m = static_cast<int>(constraints.size());
  std::vector<Triplet> trip;
  trip.reserve(A.nonZeros() + 2 * n * m);
  for (int k = 0; k < A.outerSize(); ++k)
    for (SpMat::InnerIterator it(A, k); it; ++it)
      trip.emplace_back(static_cast<int>(it.row()), static_cast<int>(it.col()), it.value());
  for (int j = 0; j < m; ++j)
    for (int i = 0; i < n; ++i)
      if (constraints[j][i] != 0.0) {
        trip.emplace_back(i, n + j, constraints[j][i]);
        trip.emplace_back(n + j, i, constraints[j][i]);
      }
  SpMat K(n + m, n + m);
  K.setFromTriplets(trip.begin(), trip.end());
  return K;
}

}  // namespace

NormEngine::NormEngine(const OperatorSet& ops) : ops_(ops) {
  const DofMap& dofs = ops.dofmap();
  c_free_ = dofs.restrict_p(ops.mean_vec);
  p_pure_neumann_ = (dofs.n_p_free() == dofs.n_scalar());

  if (ops.spaces.p_zero_mean) {
    l_bordered_ = std::make_unique<SaddleFactor>(bordered_matrix(ops.pressure_stiffness, {c_free_}));
  } else {
    l_plain_ = std::make_unique<SpdFactor>(ops.pressure_stiffness);
  }
  if (ops.spaces.u_quotient_rigid_motions) {
    std::vector<Eigen::VectorXd> cons;
    for (const auto& mode : ops.rigid_modes) cons.push_back(ops.u_mass * mode);
    e_bordered_ = std::make_unique<SaddleFactor>(bordered_matrix(ops.elasticity, cons));
  } else {
    e_plain_ = std::make_unique<SpdFactor>(ops.elasticity);
  }
}

Eigen::VectorXd NormEngine::riesz_P(const Eigen::VectorXd& r) const {
  const int n = static_cast<int>(ops_.pressure_stiffness.rows());
  if (r.size() != n) throw std::invalid_argument("riesz_P: functional size mismatch");
  if (!l_bordered_) return l_plain_->solve(r);
  if (ops_.spaces.p_zero_mean && p_pure_neumann_) {
    // Constants lie outside the space; a functional carrying them has no
    // dual representation.
    if (std::abs(r.sum()) > 1e-8 * (1.0 + r.cwiseAbs().sum()))
      throw std::invalid_argument("riesz_P: functional has a nonzero constant component");
  }
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n + 1);
  rhs.head(n) = r;
  return l_bordered_->solve(rhs).head(n);
}

Eigen::VectorXd NormEngine::riesz_U(const Eigen::VectorXd& r) const {
  const int n = static_cast<int>(ops_.elasticity.rows());
  if (r.size() != n) throw std::invalid_argument("riesz_U: functional size mismatch");
  if (!e_bordered_) return e_plain_->solve(r);
  for (const auto& mode : ops_.rigid_modes)
    if (std::abs(mode.dot(r)) > 1e-8 * (1.0 + r.norm()) * (1.0 + mode.norm()))
      throw std::invalid_argument("riesz_U: functional does not annihilate rigid motions");
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n + 3);
  rhs.head(n) = r;
  return e_bordered_->solve(rhs).head(n);
}

double NormEngine::dual_norm_P_sq(const Eigen::VectorXd& r) const {
  if (r.norm() == 0.0) return 0.0;
  return std::max(0.0, r.dot(riesz_P(r)));
}

double NormEngine::dual_norm_U_sq(const Eigen::VectorXd& r) const {
  if (r.norm() == 0.0) return 0.0;
  return std::max(0.0, r.dot(riesz_U(r)));
}

double NormEngine::p_energy_sq(const Eigen::VectorXd& n_free) const {
  return n_free.dot(ops_.pressure_stiffness * n_free);
}

double NormEngine::u_energy_sq(const Eigen::VectorXd& v_free) const {
  return v_free.dot(ops_.elasticity * v_free);
}

double NormEngine::scalar_l2_sq(const Eigen::VectorXd& q_full) const {
  return q_full.dot(ops_.mass * q_full);
}

Eigen::VectorXd NormEngine::mass_inverse(const Eigen::VectorXd& r_full) const {
  return ops_.mass_solver().solve(r_full);
}

Eigen::VectorXd canonicalize_pressure_functional(const Eigen::VectorXd& r,
                                                 const OperatorSet& ops) {
  const DofMap& dofs = ops.dofmap();
  const bool pure_neumann = (dofs.n_p_free() == dofs.n_scalar());
  if (!(ops.spaces.p_zero_mean && pure_neumann)) return r;
  const Eigen::VectorXd c_free = dofs.restrict_p(ops.mean_vec);
  return r - (r.sum() / ops.area) * c_free;
}

Eigen::VectorXd canonicalize_displacement_functional(const Eigen::VectorXd& r,
                                                     const OperatorSet& ops) {
  if (!ops.spaces.u_quotient_rigid_motions) return r;
  Eigen::Matrix3d gram;
  Eigen::Vector3d rhs;
  for (int i = 0; i < 3; ++i) {
    rhs[i] = ops.rigid_modes[i].dot(r);
    for (int j = 0; j < 3; ++j)
      gram(i, j) = ops.rigid_modes[i].dot(ops.u_mass * ops.rigid_modes[j]);
  }
  const Eigen::Vector3d s = gram.ldlt().solve(rhs);
  Eigen::VectorXd out = r;
  for (int j = 0; j < 3; ++j) out -= s[j] * (ops.u_mass * ops.rigid_modes[j]);
  return out;
}

double dual_norm_P(const Eigen::VectorXd& r, const OperatorSet& ops) {
  NormEngine engine(ops);
  return std::sqrt(engine.dual_norm_P_sq(r));
}

double dual_norm_U(const Eigen::VectorXd& r, const OperatorSet& ops) {
  NormEngine engine(ops);
  return std::sqrt(engine.dual_norm_U_sq(r));
}

NormReport trial_norm(const FourFieldTrajectory& traj, const OperatorSet& ops) {
  NormEngine engine(ops);
  const MaterialParams& par = ops.params;
  const SpaceConfig& spaces = ops.spaces;
  const DofMap& dofs = ops.dofmap();
  const double tau = traj.tau;
  const double gamma = gamma_weight(par, spaces);

  NormReport rep;
  rep.m0_sq = engine.dual_norm_P_sq(ops.mass_pfull * traj.m[0]);
  rep.m_linf_dual_sq = rep.m0_sq;

  for (int k = 0; k < traj.n_steps; ++k) {
    const Eigen::VectorXd& u = traj.u[k];
    const Eigen::VectorXd& ptot = traj.p_tot[k];
    const Eigen::VectorXd p_full = dofs.embed_p(traj.p[k]);
    const Eigen::VectorXd& m_prev = traj.m[k];
    const Eigen::VectorXd& m_next = traj.m[k + 1];

    rep.u_sq += tau * engine.u_energy_sq(u);
    rep.ptot_sq += tau / par.mu * engine.scalar_l2_sq(ptot);

    const Eigen::VectorXd evol =
        ops.mass_pfull * ((m_next - m_prev) / tau) + ops.pressure_stiffness * traj.p[k];
    rep.evolution_sq += tau * engine.dual_norm_P_sq(evol);

    const Eigen::VectorXd div_u = project_divergence(u, ops);
    rep.div_u_sq += tau * par.lambda * engine.scalar_l2_sq(div_u);
    rep.sigma_p_sq += tau * par.sigma * engine.scalar_l2_sq(p_full);

    const Eigen::VectorXd res_ptot =
        par.lambda * div_u - ptot - par.alpha * apply_PD(p_full, spaces, ops);
    rep.constraint_ptot_sq += tau / (par.mu + par.lambda) * engine.scalar_l2_sq(res_ptot);

    const Eigen::VectorXd res_m =
        par.alpha * apply_PPbar(div_u, spaces, ops) + par.sigma * p_full - m_next;
    rep.constraint_m_sq += tau * gamma * engine.scalar_l2_sq(res_m);

    // Sup in time of the dual norm of m, sampled at nodes and midpoints.
    const Eigen::VectorXd mid = 0.5 * (m_prev + m_next);
    rep.m_linf_dual_sq = std::max(rep.m_linf_dual_sq,
                                  engine.dual_norm_P_sq(ops.mass_pfull * mid));
    rep.m_linf_dual_sq = std::max(rep.m_linf_dual_sq,
                                  engine.dual_norm_P_sq(ops.mass_pfull * m_next));
  }
  return rep;
}

DataNormReport data_norm(const DiscreteLoads& loads, const OperatorSet& ops) {
  NormEngine engine(ops);
  const MaterialParams& par = ops.params;
  const double tau = loads.tau;
  const double gamma = gamma_weight(par, ops.spaces);

  DataNormReport rep;
  for (size_t k = 0; k < loads.step.size(); ++k) {
    rep.lu_sq += tau * engine.dual_norm_U_sq(
                           canonicalize_displacement_functional(loads.step[k].lu, ops));
    rep.lp_sq += tau * engine.dual_norm_P_sq(
                           canonicalize_pressure_functional(loads.step[k].lp, ops));
    if (k < loads.lptot.size() && loads.lptot[k].size() > 0) {
      const Eigen::VectorXd f = engine.mass_inverse(loads.lptot[k]);
      rep.lptot_sq += tau / (par.mu + par.lambda) * loads.lptot[k].dot(f);
    }
    if (k < loads.lm.size() && loads.lm[k].size() > 0) {
      const Eigen::VectorXd f = engine.mass_inverse(loads.lm[k]);
      rep.lm_sq += tau * gamma * loads.lm[k].dot(f);
    }
  }
  rep.l0_sq = engine.dual_norm_P_sq(
      canonicalize_pressure_functional(ops.mass_pfull * loads.m0, ops));
  return rep;
}

}  // namespace biot
