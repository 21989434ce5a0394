#include "biot/verification.hpp"

#include <atomic>
#include <cmath>
#include <mutex>
#include <random>
#include <stdexcept>
#include <thread>

#include <Eigen/Dense>

namespace biot {

DivInfSup div_infsup_constants(const OperatorSet& ops) {
  NormEngine engine(ops);
  const int n1 = static_cast<int>(ops.mass.rows());

  // Schur complement of the divergence against the elasticity energy;
  // dense because the inverse couples everything, but the total-pressure
  // space is small.
  Eigen::MatrixXd schur(n1, n1);
  for (int j = 0; j < n1; ++j) {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(n1);
    e[j] = 1.0;
    const Eigen::VectorXd rhs = ops.divergence.transpose() * e;
    schur.col(j) = ops.divergence * engine.riesz_U(rhs);
  }
  schur = 0.5 * (schur + schur.transpose()).eval();

  const SparseSym A = SparseSym::from_dense(schur);
  const SparseSym M = SparseSym(SpMat((1.0 / ops.params.mu) * ops.mass));
  std::vector<Eigen::VectorXd> kernel;
  if (ops.spaces.D_zero_mean) kernel.push_back(Eigen::VectorXd::Ones(n1));

  DivInfSup out;
  out.c_h = eig_extremes(A, M, EigWhich::SmallestNonzero, 1e-10, kernel).value;
  out.C_h = eig_extremes(A, M, EigWhich::Largest, 1e-10, kernel).value;
  return out;
}

namespace {

struct IntervalTestFunction {
  // Step-constant components and the linear-in-time Riesz lift of the
  // fluid content; theta is the local coordinate on the interval.
  double b_const = 0.0;    // action of the constant components plus r.n_a
  double b_theta = 0.0;    // coefficient of theta in the action
  double q_const = 0.0;    // norm integrand: q_const + 2 theta q_lin + theta^2 q_quad
  double q_lin = 0.0;
  double q_quad = 0.0;
};

}  // namespace

InfSupQuotient infsup_lower_bound(const FourFieldTrajectory& traj, const OperatorSet& ops,
                                  const DivInfSup& constants) {
  NormEngine engine(ops);
  const MaterialParams& par = ops.params;
  const SpaceConfig& spaces = ops.spaces;
  const DofMap& dofs = ops.dofmap();
  const double tau = traj.tau;
  const double gamma = gamma_weight(par, spaces);
  const double coef2 = 4.0 * std::max(1.0, constants.C_h) / (par.mu + par.lambda);
  const double coef3 = 4.0 * gamma / std::min(1.0, constants.c_h);

  const NormReport trial = trial_norm(traj, ops);
  InfSupQuotient out;
  if (trial.augmented_sq() <= 0.0) {
    out.degenerate = true;
    return out;
  }

  // Peak of the sampled dual norm of m over nodes and midpoints.
  double best_val = engine.dual_norm_P_sq(ops.mass_pfull * traj.m[0]);
  double s_bar = 0.0;
  for (int k = 0; k < traj.n_steps; ++k) {
    const Eigen::VectorXd mid = 0.5 * (traj.m[k] + traj.m[k + 1]);
    const double v_mid = engine.dual_norm_P_sq(ops.mass_pfull * mid);
    if (v_mid > best_val) {
      best_val = v_mid;
      s_bar = (k + 0.5) * tau;
    }
    const double v_node = engine.dual_norm_P_sq(ops.mass_pfull * traj.m[k + 1]);
    if (v_node > best_val) {
      best_val = v_node;
      s_bar = (k + 1.0) * tau;
    }
  }
  out.s_bar = s_bar;

  // Per-interval data of the test function.
  std::vector<IntervalTestFunction> parts(traj.n_steps);
  const Eigen::VectorXd n0 = 2.0 * engine.riesz_P(ops.mass_pfull * traj.m[0]);
  for (int k = 0; k < traj.n_steps; ++k) {
    const Eigen::VectorXd& u = traj.u[k];
    const Eigen::VectorXd& ptot = traj.p_tot[k];
    const Eigen::VectorXd p_full = dofs.embed_p(traj.p[k]);
    const Eigen::VectorXd& m_prev = traj.m[k];
    const Eigen::VectorXd& m_next = traj.m[k + 1];

    const Eigen::VectorXd dstar_ptot = ops.divergence.transpose() * ptot;
    const Eigen::VectorXd v = u + engine.riesz_U(dstar_ptot);

    const Eigen::VectorXd div_u = project_divergence(u, ops);
    const Eigen::VectorXd res2 =
        par.lambda * div_u - ptot - par.alpha * apply_PD(p_full, spaces, ops);
    const Eigen::VectorXd res3 =
        par.alpha * apply_PPbar(div_u, spaces, ops) + par.sigma * p_full - m_next;
    const Eigen::VectorXd z2 = coef2 * res2;
    const Eigen::VectorXd z3 = coef3 * res3;

    const Eigen::VectorXd r_k =
        ops.mass_pfull * ((m_next - m_prev) / tau) + ops.pressure_stiffness * traj.p[k];
    const Eigen::VectorXd n_a = engine.riesz_P(2.0 * (ops.mass_pfull * m_prev) + r_k);
    const Eigen::VectorXd n_b = engine.riesz_P(2.0 * (ops.mass_pfull * (m_next - m_prev)));

    IntervalTestFunction part;
    const double row1 = (ops.elasticity * u + dstar_ptot).dot(v);
    const double row2 = res2.dot(ops.mass * z2);
    const double row3 = res3.dot(ops.mass * z3);
    part.b_const = row1 + row2 + row3 + r_k.dot(n_a);
    part.b_theta = r_k.dot(n_b);

    const double norm_const = engine.u_energy_sq(v) +
                              (par.mu + par.lambda) * z2.dot(ops.mass * z2) +
                              (1.0 / gamma) * z3.dot(ops.mass * z3);
    part.q_const = norm_const + engine.p_energy_sq(n_a);
    part.q_lin = n_a.dot(ops.pressure_stiffness * n_b);
    part.q_quad = engine.p_energy_sq(n_b);
    parts[k] = part;
  }

  const double m0_pair = (ops.mass_pfull * traj.m[0]).dot(n0);

  // Covered fraction of interval k for the cutoff s.
  auto covered = [&](int k, double s) {
    const double t0 = k * tau;
    return std::clamp((s - t0) / tau, 0.0, 1.0);
  };
  auto b_of = [&](double s) {
    double b = m0_pair;
    for (int k = 0; k < traj.n_steps; ++k) {
      const double te = covered(k, s);
      if (te <= 0.0) continue;
      b += tau * (te * parts[k].b_const + 0.5 * te * te * parts[k].b_theta);
    }
    return b;
  };
  auto norm_upto = [&](int k, double te) {
    const auto& p = parts[k];
    return tau * (p.q_const * te + p.q_lin * te * te + p.q_quad * te * te * te / 3.0);
  };

  const double b_total = b_of(par.T) + b_of(s_bar);
  double norm_sq = 4.0 * engine.p_energy_sq(n0);
  for (int k = 0; k < traj.n_steps; ++k) {
    const double te = covered(k, s_bar);
    // Components double where both cutoffs cover the interval.
    norm_sq += 3.0 * norm_upto(k, te) + norm_upto(k, 1.0);
  }

  out.b_value = b_total;
  out.y2_norm = std::sqrt(std::max(0.0, norm_sq));
  out.quotient = (out.y2_norm > 0.0) ? b_total / out.y2_norm : 0.0;
  out.kappa0 = out.quotient / std::sqrt(trial.augmented_sq());
  return out;
}

NondegeneracyReport check_nondegeneracy(const OperatorSet& ops, double tau,
                                        bool break_mean_multiplier) {
  const SpMat K = TimeStepper::build_step_matrix(ops, tau, !break_mean_multiplier);
  const Eigen::MatrixXd dense(K);
  Eigen::FullPivLU<Eigen::MatrixXd> lu(dense);

  NondegeneracyReport rep;
  const Eigen::VectorXd diag = lu.matrixLU().diagonal().cwiseAbs();
  rep.smallest_pivot = diag.minCoeff();
  rep.nonsingular = lu.rank() == dense.rows();
  return rep;
}

StabilityEntry stability_ratio(const FourFieldTrajectory& traj, const DiscreteLoads& loads,
                               const OperatorSet& ops) {
  StabilityEntry entry;
  entry.params = ops.params;
  entry.trial = trial_norm(traj, ops);
  entry.data = data_norm(loads, ops);
  entry.lhs_sq = entry.trial.stability_lhs_sq();
  entry.rhs_sq = entry.data.total_sq();
  if (!(entry.rhs_sq > 0.0))
    throw std::invalid_argument("stability_ratio: loads must be nonzero");
  entry.ratio = entry.lhs_sq / entry.rhs_sq;
  return entry;
}

PressureControl check_L2L2_pressure(const FourFieldTrajectory& traj, const OperatorSet& ops) {
  NormEngine engine(ops);
  const MaterialParams& par = ops.params;
  const DofMap& dofs = ops.dofmap();
  const double gamma = gamma_weight(par, ops.spaces);

  PressureControl out;
  double int_p = 0.0;
  for (int k = 0; k < traj.n_steps; ++k) {
    const Eigen::VectorXd p_full = dofs.embed_p(traj.p[k]);
    const Eigen::VectorXd pd = apply_PD(p_full, ops.spaces, ops);
    out.numerator += traj.tau * (par.alpha * par.alpha / (par.mu + par.lambda)) *
                     engine.scalar_l2_sq(pd);
    out.numerator += traj.tau * par.sigma * engine.scalar_l2_sq(p_full);
    int_p += traj.tau * engine.scalar_l2_sq(p_full);
  }
  out.gamma_lower = int_p / gamma;

  const double trial_sq = trial_norm(traj, ops).trial_sq();
  if (trial_sq <= 0.0) {
    out.degenerate = true;
    return out;
  }
  out.ratio = out.numerator / ((1.0 + par.T) * trial_sq);
  return out;
}

namespace {

// Shifted Legendre polynomials on [0,1] in the monomial basis, rows by
// degree, plus antiderivative coefficients (constant term zero).
constexpr double kLegendre[4][4] = {
    {1.0, 0.0, 0.0, 0.0},
    {-1.0, 2.0, 0.0, 0.0},
    {1.0, -6.0, 6.0, 0.0},
    {-1.0, 12.0, -30.0, 20.0},
};

double legendre_antiderivative(int degree, double u) {
  double val = 0.0;
  double power = u;
  for (int i = 0; i <= degree; ++i) {
    val += kLegendre[degree][i] / (i + 1.0) * power;
    power *= u;
  }
  return val;
}

}  // namespace

TimePolynomial project_time_polynomial(const std::vector<Eigen::VectorXd>& p_steps, double tau,
                                       int r) {
  if (r < 0 || r > 3)
    throw std::invalid_argument("project_time_polynomial: degree must be in {0,1,2,3}; higher "
                                "degrees are rejected (ill-conditioned time Gram)");
  if (p_steps.empty()) throw std::invalid_argument("project_time_polynomial: empty history");
  const int N = static_cast<int>(p_steps.size());
  const double T = tau * N;
  const int dim = static_cast<int>(p_steps[0].size());

  // Moments of the piecewise-constant history against the orthonormal
  // shifted Legendre basis; interval integrals are exact.
  std::vector<Eigen::VectorXd> moments(r + 1, Eigen::VectorXd::Zero(dim));
  for (int j = 0; j <= r; ++j) {
    const double scale = std::sqrt((2.0 * j + 1.0) / T);
    for (int k = 0; k < N; ++k) {
      const double u0 = static_cast<double>(k) / N;
      const double u1 = static_cast<double>(k + 1) / N;
      const double w = scale * T * (legendre_antiderivative(j, u1) - legendre_antiderivative(j, u0));
      moments[j] += w * p_steps[k];
    }
  }

  // Convert from the Legendre to the monomial basis in t/T, then to t.
  TimePolynomial poly;
  poly.T = T;
  poly.coeff.assign(r + 1, Eigen::VectorXd::Zero(dim));
  for (int j = 0; j <= r; ++j) {
    const double scale = std::sqrt((2.0 * j + 1.0) / T);
    for (int i = 0; i <= j; ++i)
      poly.coeff[i] += scale * kLegendre[j][i] / std::pow(T, i) * moments[j];
  }
  return poly;
}

Eigen::VectorXd TimePolynomial::eval(double t) const {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(coeff.empty() ? 0 : coeff[0].size());
  double power = 1.0;
  for (const auto& c : coeff) {
    out += power * c;
    power *= t;
  }
  return out;
}

double check_Pr_bound(const FourFieldTrajectory& traj, const OperatorSet& ops, int r) {
  if (r < 0 || r > 3) throw std::invalid_argument("check_Pr_bound: degree must be in {0,1,2,3}");
  NormEngine engine(ops);
  const double T = traj.tau * traj.n_steps;

  // Energy of the projection directly from the orthonormal moments.
  double energy = 0.0;
  for (int j = 0; j <= r; ++j) {
    const double scale = std::sqrt((2.0 * j + 1.0) / T);
    Eigen::VectorXd moment = Eigen::VectorXd::Zero(traj.p[0].size());
    for (int k = 0; k < traj.n_steps; ++k) {
      const double u0 = static_cast<double>(k) / traj.n_steps;
      const double u1 = static_cast<double>(k + 1) / traj.n_steps;
      moment += scale * T *
                (legendre_antiderivative(j, u1) - legendre_antiderivative(j, u0)) * traj.p[k];
    }
    energy += engine.p_energy_sq(moment);
  }

  const double trial_sq = trial_norm(traj, ops).trial_sq();
  if (trial_sq <= 0.0) return 0.0;
  return energy / trial_sq;
}

double check_antiderivative(const FourFieldTrajectory& traj, const OperatorSet& ops) {
  NormEngine engine(ops);
  Eigen::VectorXd running = Eigen::VectorXd::Zero(traj.p.empty() ? 0 : traj.p[0].size());
  double sup_sq = 0.0;
  for (int k = 0; k < traj.n_steps; ++k) {
    running += traj.tau * traj.p[k];
    // The antiderivative is piecewise linear; its energy norm peaks at
    // interval endpoints.
    sup_sq = std::max(sup_sq, engine.p_energy_sq(running));
  }
  const double trial_sq = trial_norm(traj, ops).trial_sq();
  if (trial_sq <= 0.0) return 0.0;
  return std::sqrt(sup_sq / trial_sq);
}

LoadData random_smooth_loads(std::uint32_t seed) {
  std::mt19937 gen(seed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);

  // Low-order trigonometric modes resolve well on coarse meshes.
  struct Term {
    double a, b, c;
  };
  auto draw = [&]() { return Term{unif(gen), unif(gen), unif(gen)}; };
  const std::array<Term, 4> tx = {draw(), draw(), draw(), draw()};
  const std::array<Term, 4> ty = {draw(), draw(), draw(), draw()};
  const std::array<Term, 4> tp = {draw(), draw(), draw(), draw()};
  const std::array<double, 4> t0 = {unif(gen), unif(gen), unif(gen), unif(gen)};

  auto spatial = [](int m, const Eigen::Vector2d& x) {
    switch (m) {
      case 0: return 1.0;
      case 1: return std::cos(M_PI * x.x());
      case 2: return std::cos(M_PI * x.y());
      default: return std::sin(M_PI * x.x()) * std::sin(M_PI * x.y());
    }
  };
  auto profile = [](const Term& term, double t) {
    return term.a + term.b * t + term.c * std::cos(M_PI * t);
  };

  LoadData loads;
  loads.f_u = [tx, ty, spatial, profile](const Eigen::Vector2d& x, double t) {
    Eigen::Vector2d f = Eigen::Vector2d::Zero();
    for (int m = 0; m < 4; ++m) {
      f.x() += spatial(m, x) * profile(tx[m], t);
      f.y() += spatial(m, x) * profile(ty[m], t);
    }
    return f;
  };
  loads.f_p = [tp, spatial, profile](const Eigen::Vector2d& x, double t) {
    double f = 0.0;
    for (int m = 0; m < 4; ++m) f += spatial(m, x) * profile(tp[m], t);
    return f;
  };
  // Zero-mean modes keep the initial datum admissible in every space
  // configuration.
  loads.ell0 = [t0](const Eigen::Vector2d& x) {
    return t0[0] * std::cos(M_PI * x.x()) + t0[1] * std::cos(M_PI * x.y()) +
           t0[2] * std::cos(M_PI * x.x()) * std::cos(M_PI * x.y()) +
           t0[3] * std::cos(2.0 * M_PI * x.x()) * std::cos(2.0 * M_PI * x.y());
  };
  return loads;
}

std::vector<MaterialParams> ParameterGrid::points() const {
  std::vector<MaterialParams> out;
  for (double lambda : lambdas)
    for (double sigma : sigmas)
      for (double kappa : kappas)
        for (double alpha : alphas) {
          MaterialParams p;
          p.mu = mu;
          p.lambda = lambda;
          p.sigma = sigma;
          p.kappa = kappa;
          p.alpha = alpha;
          p.T = T;
          out.push_back(p);
        }
  return out;
}

SweepResult run_stability_sweep(const ParameterGrid& grid, const Mesh& mesh,
                                const BoundaryConfig& bc, int n_steps, std::uint32_t seed,
                                bool parallel, double tol) {
  const std::vector<MaterialParams> points = grid.points();
  const LoadData loads = random_smooth_loads(seed);

  SweepResult result;
  result.points.resize(points.size());

  auto run_point = [&](size_t idx) {
    const MaterialParams& params = points[idx];
    const SpaceConfig spaces = select_spaces(bc, params);
    const OperatorSet ops = assemble_operators(mesh, params, spaces, bc);
    const DiscreteLoads discrete = realize_loads(loads, mesh, ops, bc, n_steps);
    const FourFieldTrajectory traj = run_trajectory(discrete, n_steps, ops, tol);

    SweepPointResult& point = result.points[idx];
    point.params = params;
    point.stability = stability_ratio(traj, discrete, ops);
    const DivInfSup constants = div_infsup_constants(ops);
    point.infsup = infsup_lower_bound(traj, ops, constants);
    point.nondegeneracy = check_nondegeneracy(ops, discrete.tau);
    point.pressure = check_L2L2_pressure(traj, ops);
    for (int r = 0; r < 3; ++r) point.pr_ratio[r] = check_Pr_bound(traj, ops, r);
    point.antiderivative_ratio = check_antiderivative(traj, ops);
  };

  if (parallel) {
    const unsigned n_threads = std::max(1u, std::thread::hardware_concurrency());
    std::atomic<size_t> next{0};
    std::vector<std::thread> workers;
    std::exception_ptr error;
    std::mutex error_mutex;
    for (unsigned w = 0; w < n_threads; ++w)
      workers.emplace_back([&]() {
        for (size_t idx = next.fetch_add(1); idx < points.size(); idx = next.fetch_add(1)) {
          try {
            run_point(idx);
          } catch (...) {
            std::lock_guard<std::mutex> lock(error_mutex);
            if (!error) error = std::current_exception();
          }
        }
      });
    for (auto& t : workers) t.join();
    if (error) std::rethrow_exception(error);
  } else {
    for (size_t idx = 0; idx < points.size(); ++idx) run_point(idx);
  }

  result.ratio_min = result.points.front().stability.ratio;
  result.ratio_max = result.ratio_min;
  for (const auto& point : result.points) {
    result.ratio_min = std::min(result.ratio_min, point.stability.ratio);
    result.ratio_max = std::max(result.ratio_max, point.stability.ratio);
  }
  return result;
}

}  // namespace biot
