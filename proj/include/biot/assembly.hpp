#ifndef BIOT_ASSEMBLY_HPP
#define BIOT_ASSEMBLY_HPP

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "biot/fem.hpp"
#include "biot/mesh.hpp"
#include "biot/params.hpp"

namespace biot {

using SpMat = Eigen::SparseMatrix<double>;

using ScalarField = std::function<double(const Eigen::Vector2d&, double)>;
using VectorField = std::function<Eigen::Vector2d(const Eigen::Vector2d&, double)>;

// Discrete operators of the four-field system on one mesh:
//   elasticity          int 2 mu eps(phi_i):eps(phi_j), free displacement dofs
//   pressure_stiffness  int kappa grad psi_i . grad psi_j, free pressure dofs
//   divergence          int psi_i div phi_j, all vertices x free u dofs
//   mass                P1 mass over all vertices
//   mean_vec            int psi_i
// plus the rigid-motion basis when the displacement space is a quotient.
struct OperatorSet {
  SpMat elasticity;
  SpMat pressure_stiffness;
  SpMat divergence;
  SpMat mass;
  Eigen::VectorXd mean_vec;
  double area = 0.0;

  // Mass rows/cols restricted to free pressure dofs.
  SpMat mass_pp;    // n_p_free x n_p_free
  SpMat mass_pfull; // n_p_free x n_scalar

  std::vector<Eigen::VectorXd> rigid_modes;  // free-u coefficient vectors
  SpMat u_mass;                              // vector P2 mass (only when quotient)

  SpaceConfig spaces;
  MaterialParams params;
  std::shared_ptr<const DofMap> dofs;
  std::shared_ptr<const Mesh> mesh;

  const DofMap& dofmap() const { return *dofs; }

  // Lazily built mass factorization shared by the projection helpers. Each
  // sweep point owns its OperatorSet, so no cross-thread sharing happens.
  const Eigen::SimplicialLDLT<SpMat>& mass_solver() const;

 private:
  mutable std::shared_ptr<Eigen::SimplicialLDLT<SpMat>> mass_factor_;
};

OperatorSet assemble_operators(const Mesh& mesh, const MaterialParams& params,
                               const SpaceConfig& spaces, const BoundaryConfig& bc);

// L2-orthogonal projections onto the constrained scalar spaces: subtract
// the mean-value component when the respective space carries the zero-mean
// constraint, otherwise the identity. Idempotent.
Eigen::VectorXd apply_PD(const Eigen::VectorXd& q, const SpaceConfig& spaces,
                         const OperatorSet& ops);
Eigen::VectorXd apply_PPbar(const Eigen::VectorXd& q, const SpaceConfig& spaces,
                            const OperatorSet& ops);

// Discrete divergence: vertex coefficients of the L2 projection of div u_h
// onto the linear Lagrange space (mass solve against the divergence
// pairing). u given on free dofs.
Eigen::VectorXd project_divergence(const Eigen::VectorXd& u, const OperatorSet& ops);

struct LoadVectors {
  Eigen::VectorXd lu;  // free displacement dofs
  Eigen::VectorXd lp;  // free pressure dofs
};

// Volume and natural-boundary data at time t. Boundary data is supplied
// per segment label and is rejected on essential segments.
struct FieldData {
  VectorField f_u;  // may be empty
  ScalarField f_p;
  std::map<std::string, VectorField> g_u;
  std::map<std::string, ScalarField> g_p;
};

LoadVectors assemble_loads(const Mesh& mesh, const DofMap& dofs, const BoundaryConfig& bc,
                           const FieldData& data, double t);

// L2 projection of a scalar field onto the P1 space (all vertices).
Eigen::VectorXd project_scalar_field(const Mesh& mesh, const OperatorSet& ops,
                                     const std::function<double(const Eigen::Vector2d&)>& f);

// P1/P2 nodal interpolation helpers.
Eigen::VectorXd interpolate_p1(const Mesh& mesh,
                               const std::function<double(const Eigen::Vector2d&)>& f);
Eigen::VectorXd interpolate_u(const DofMap& dofs,
                              const std::function<Eigen::Vector2d(const Eigen::Vector2d&)>& f);

}  // namespace biot

#endif
