#ifndef BIOT_SOLVER_HPP
#define BIOT_SOLVER_HPP

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "biot/assembly.hpp"
#include "biot/sparse.hpp"

namespace biot {

// Space-time data of the evolution problem. Either callable fields
// (sampled at interval midpoints) or pre-assembled per-step vectors;
// the initial fluid content is always part of the data.
struct LoadData {
  VectorField f_u;
  ScalarField f_p;
  std::map<std::string, VectorField> g_u;
  std::map<std::string, ScalarField> g_p;
  std::function<double(const Eigen::Vector2d&)> ell0;

  struct Preassembled {
    std::vector<LoadVectors> step;           // per step: lu, lp
    std::vector<Eigen::VectorXd> lptot, lm;  // optional constraint-row data (full scalar size)
    Eigen::VectorXd m0;                      // initial fluid content coefficients
  };
  std::optional<Preassembled> preassembled;
};

// Per-step realization of the loads in the discrete spaces. Load fields
// are treated as piecewise constant in time with interval-midpoint values.
struct DiscreteLoads {
  double tau = 0.0;
  std::vector<LoadVectors> step;
  std::vector<Eigen::VectorXd> lptot, lm;  // empty means zero
  Eigen::VectorXd m0;

  bool has_constraint_data() const { return !lptot.empty() || !lm.empty(); }
};

DiscreteLoads realize_loads(const LoadData& loads, const Mesh& mesh, const OperatorSet& ops,
                            const BoundaryConfig& bc, int n_steps);

// Discrete trajectory: u, p_tot, p piecewise constant on (t_{k-1}, t_k],
// the fluid content continuous piecewise linear with nodal values m[0..N],
// m[0] prescribed by the initial datum.
struct FourFieldTrajectory {
  double tau = 0.0;
  int n_steps = 0;
  std::vector<Eigen::VectorXd> u;      // N entries, free displacement dofs
  std::vector<Eigen::VectorXd> p_tot;  // N entries, all vertices
  std::vector<Eigen::VectorXd> p;      // N entries, free pressure dofs
  std::vector<Eigen::VectorXd> m;      // N+1 entries, all vertices

  double time_at(int node) const { return tau * node; }
};

struct StepSolution {
  Eigen::VectorXd u, p_tot, p, m;
};

// Monolithic per-step system of the four-field scheme with the mean-value
// and rigid-motion constraints attached as multiplier rows. The matrix is
// shared by all steps of a trajectory and factorized once.
class TimeStepper {
 public:
  TimeStepper(const OperatorSet& ops, double tau, double tol = 1e-10);

  StepSolution step(const Eigen::VectorXd& prev_m, const LoadVectors& loads,
                    const Eigen::VectorXd* lptot = nullptr,
                    const Eigen::VectorXd* lm = nullptr) const;

  const SpMat& matrix() const { return matrix_; }
  int system_size() const { return size_; }

  // Assembled per-step matrix; with include_p_mean_multiplier = false the
  // pressure mean constraint is deliberately dropped (nondegeneracy probe).
  static SpMat build_step_matrix(const OperatorSet& ops, double tau,
                                 bool include_p_mean_multiplier = true);

 private:
  const OperatorSet& ops_;
  double tau_;
  double tol_;
  int size_ = 0;
  SpMat matrix_;
  std::unique_ptr<SaddleFactor> factor_;
};

StepSolution backward_euler_step(const Eigen::VectorXd& prev_m, double tau,
                                 const LoadVectors& loads, const OperatorSet& ops,
                                 double tol = 1e-10);

FourFieldTrajectory run_trajectory(const DiscreteLoads& loads, int n_steps,
                                   const OperatorSet& ops, double tol = 1e-10);

// One CSV per field with columns (time, dof, value) plus a manifest file.
void export_trajectory(const FourFieldTrajectory& traj, const OperatorSet& ops,
                       const std::string& directory, const std::string& prefix);

}  // namespace biot

#endif
