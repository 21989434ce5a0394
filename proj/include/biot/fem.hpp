#ifndef BIOT_FEM_HPP
#define BIOT_FEM_HPP

#include <array>
#include <vector>

#include <Eigen/Dense>

#include "biot/mesh.hpp"
#include "biot/params.hpp"

namespace biot {

// Symmetric 7-point triangle rule, exact for polynomials of degree 5.
// Points in barycentric coordinates, weights normalized to sum to one.
struct TriangleQuadrature {
  static constexpr int n_points = 7;
  std::array<Eigen::Vector3d, n_points> bary;
  std::array<double, n_points> weight;
  TriangleQuadrature();
};

const TriangleQuadrature& triangle_rule();

// 4-point Gauss rule on [0,1], exact for degree 7.
struct EdgeQuadrature {
  static constexpr int n_points = 4;
  std::array<double, n_points> point;
  std::array<double, n_points> weight;
  EdgeQuadrature();
};

const EdgeQuadrature& edge_rule();

// Scalar P1 and P2 shape functions on the reference triangle, by
// barycentric coordinates. P2 nodes: 0..2 vertices, 3..5 midpoints of
// edges (1,2), (2,0), (0,1).
void p1_values(const Eigen::Vector3d& bary, std::array<double, 3>& val);
void p2_values(const Eigen::Vector3d& bary, std::array<double, 6>& val);
// Gradients with respect to barycentric coordinates are combined with the
// per-element gradients of the barycentric functions themselves.
void p2_bary_gradients(const Eigen::Vector3d& bary, std::array<Eigen::Vector3d, 6>& grad);

// Geometry of one triangle: physical gradients of the three barycentric
// coordinate functions and the element area.
struct ElementGeometry {
  std::array<Eigen::Vector2d, 3> grad_bary;
  double area = 0.0;
  std::array<Eigen::Vector2d, 3> corner;

  Eigen::Vector2d point(const Eigen::Vector3d& bary) const {
    return bary[0] * corner[0] + bary[1] * corner[1] + bary[2] * corner[2];
  }
};

ElementGeometry element_geometry(const Mesh& mesh, int tri);

// Degrees of freedom of the discrete pair: vector quadratic Lagrange for
// the displacement, linear Lagrange for the three scalar fields. Scalar
// fields for the total pressure and the fluid content use all vertices;
// the pressure drops its essential-boundary vertices.
struct DofMap {
  int n_vertex = 0;
  int n_p2_node = 0;  // vertices + edge midpoints

  // Per triangle: the six P2 node ids (3 vertices, then midpoints of
  // edges (1,2), (2,0), (0,1)).
  std::vector<std::array<int, 6>> tri_nodes;
  // Coordinates of all P2 nodes (vertex coordinates first).
  std::vector<Eigen::Vector2d> node_coord;
  // Boundary edge -> midpoint P2 node.
  std::vector<int> boundary_edge_midnode;

  std::vector<bool> u_node_essential;  // per P2 node
  std::vector<bool> p_essential;       // per vertex

  // Displacement dof = 2*node + component; free indices or -1.
  std::vector<int> u_free_index;
  std::vector<int> u_free_dofs;
  std::vector<int> p_free_index;
  std::vector<int> p_free_dofs;

  int n_u_free() const { return static_cast<int>(u_free_dofs.size()); }
  int n_p_free() const { return static_cast<int>(p_free_dofs.size()); }
  int n_scalar() const { return n_vertex; }

  // Scatter a free-dof pressure vector into a full vertex vector (zeros on
  // essential vertices) and gather back.
  Eigen::VectorXd embed_p(const Eigen::VectorXd& free) const;
  Eigen::VectorXd restrict_p(const Eigen::VectorXd& full) const;
  Eigen::VectorXd embed_u(const Eigen::VectorXd& free) const;
};

DofMap build_dofmap(const Mesh& mesh, const BoundaryConfig& bc);

}  // namespace biot

#endif
