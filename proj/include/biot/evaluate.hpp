#ifndef BIOT_EVALUATE_HPP
#define BIOT_EVALUATE_HPP

#include <functional>

#include <Eigen/Dense>

#include "biot/fem.hpp"
#include "biot/mesh.hpp"

namespace biot {

// Quadrature evaluation of energy-norm distances between discrete fields
// and callable references. Passing a zero reference yields the plain norm,
// which provides a matrix-free route to the discrete norm identities.

// 2 mu | eps(u_h) - sym G |^2 integrated over the domain; G is the exact
// displacement gradient.
double u_energy_error_sq(const Mesh& mesh, const DofMap& dofs, double mu,
                         const Eigen::VectorXd& u_free,
                         const std::function<Eigen::Matrix2d(const Eigen::Vector2d&)>& grad_exact);

// kappa | grad p_h - g |^2; p given on free dofs.
double p_energy_error_sq(const Mesh& mesh, const DofMap& dofs, double kappa,
                         const Eigen::VectorXd& p_free,
                         const std::function<Eigen::Vector2d(const Eigen::Vector2d&)>& grad_exact);

// | q_h - f |^2 for a P1 field over all vertices.
double scalar_l2_error_sq(const Mesh& mesh, const Eigen::VectorXd& q_full,
                          const std::function<double(const Eigen::Vector2d&)>& f_exact);

}  // namespace biot

#endif
