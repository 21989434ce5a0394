#include "biot/fem.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

namespace biot {

TriangleQuadrature::TriangleQuadrature() {
  const double s15 = std::sqrt(15.0);
  const double w0 = 9.0 / 40.0;
  const double wa = (155.0 - s15) / 1200.0;  // group at a = (6-sqrt(15))/21
  const double wb = (155.0 + s15) / 1200.0;  // group at b = (6+sqrt(15))/21
  const double a = (6.0 - s15) / 21.0;
  const double b = (6.0 + s15) / 21.0;

  bary[0] = {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};
  weight[0] = w0;
  bary[1] = {a, a, 1.0 - 2.0 * a};
  bary[2] = {a, 1.0 - 2.0 * a, a};
  bary[3] = {1.0 - 2.0 * a, a, a};
  weight[1] = weight[2] = weight[3] = wa;
  bary[4] = {b, b, 1.0 - 2.0 * b};
  bary[5] = {b, 1.0 - 2.0 * b, b};
  bary[6] = {1.0 - 2.0 * b, b, b};
  weight[4] = weight[5] = weight[6] = wb;
}

const TriangleQuadrature& triangle_rule() {
  static const TriangleQuadrature rule;
  return rule;
}

EdgeQuadrature::EdgeQuadrature() {
  // Gauss-Legendre nodes on [-1,1] mapped to [0,1].
  const double r1 = std::sqrt(3.0 / 7.0 - 2.0 / 7.0 * std::sqrt(6.0 / 5.0));
  const double r2 = std::sqrt(3.0 / 7.0 + 2.0 / 7.0 * std::sqrt(6.0 / 5.0));
  const double w1 = (18.0 + std::sqrt(30.0)) / 36.0;
  const double w2 = (18.0 - std::sqrt(30.0)) / 36.0;
  point = {0.5 * (1 - r2), 0.5 * (1 - r1), 0.5 * (1 + r1), 0.5 * (1 + r2)};
  weight = {0.5 * w2, 0.5 * w1, 0.5 * w1, 0.5 * w2};
}

const EdgeQuadrature& edge_rule() {
  static const EdgeQuadrature rule;
  return rule;
}

void p1_values(const Eigen::Vector3d& bary, std::array<double, 3>& val) {
  val = {bary[0], bary[1], bary[2]};
}

void p2_values(const Eigen::Vector3d& bary, std::array<double, 6>& val) {
  const double l0 = bary[0], l1 = bary[1], l2 = bary[2];
  val[0] = l0 * (2 * l0 - 1);
  val[1] = l1 * (2 * l1 - 1);
  val[2] = l2 * (2 * l2 - 1);
  val[3] = 4 * l1 * l2;
  val[4] = 4 * l2 * l0;
  val[5] = 4 * l0 * l1;
}

void p2_bary_gradients(const Eigen::Vector3d& bary, std::array<Eigen::Vector3d, 6>& grad) {
  const double l0 = bary[0], l1 = bary[1], l2 = bary[2];
  grad[0] = {4 * l0 - 1, 0, 0};
  grad[1] = {0, 4 * l1 - 1, 0};
  grad[2] = {0, 0, 4 * l2 - 1};
  grad[3] = {0, 4 * l2, 4 * l1};
  grad[4] = {4 * l2, 0, 4 * l0};
  grad[5] = {4 * l1, 4 * l0, 0};
}

ElementGeometry element_geometry(const Mesh& mesh, int tri) {
  ElementGeometry g;
  const auto& t = mesh.triangles[tri];
  for (int i = 0; i < 3; ++i) g.corner[i] = mesh.vertices[t[i]];
  const Eigen::Vector2d e1 = g.corner[1] - g.corner[0];
  const Eigen::Vector2d e2 = g.corner[2] - g.corner[0];
  const double det = e1.x() * e2.y() - e1.y() * e2.x();
  if (!(det > 0.0))
    throw std::runtime_error("assembly: degenerate triangle " + std::to_string(tri));
  g.area = 0.5 * det;
  // grad of barycentric coordinate i is the inward normal of the opposite
  // edge divided by twice the area.
  const Eigen::Vector2d p0 = g.corner[0], p1 = g.corner[1], p2 = g.corner[2];
  g.grad_bary[0] = Eigen::Vector2d(p1.y() - p2.y(), p2.x() - p1.x()) / det;
  g.grad_bary[1] = Eigen::Vector2d(p2.y() - p0.y(), p0.x() - p2.x()) / det;
  g.grad_bary[2] = Eigen::Vector2d(p0.y() - p1.y(), p1.x() - p0.x()) / det;
  return g;
}

namespace {
using EdgeKey = std::pair<int, int>;
EdgeKey edge_key(int a, int b) { return {std::min(a, b), std::max(a, b)}; }
}  // namespace

DofMap build_dofmap(const Mesh& mesh, const BoundaryConfig& bc) {
  for (const auto& label : mesh.boundary_labels()) bc.at(label);  // all labels tagged

  DofMap dm;
  dm.n_vertex = mesh.n_vertices();
  dm.node_coord = mesh.vertices;

  std::map<EdgeKey, int> edge_node;
  auto midnode = [&](int a, int b) {
    const EdgeKey k = edge_key(a, b);
    auto it = edge_node.find(k);
    if (it != edge_node.end()) return it->second;
    const int id = static_cast<int>(dm.node_coord.size());
    dm.node_coord.push_back(0.5 * (mesh.vertices[a] + mesh.vertices[b]));
    edge_node.emplace(k, id);
    return id;
  };

  dm.tri_nodes.reserve(mesh.n_triangles());
  for (const auto& t : mesh.triangles) {
    std::array<int, 6> nodes;
    nodes[0] = t[0];
    nodes[1] = t[1];
    nodes[2] = t[2];
    nodes[3] = midnode(t[1], t[2]);
    nodes[4] = midnode(t[2], t[0]);
    nodes[5] = midnode(t[0], t[1]);
    dm.tri_nodes.push_back(nodes);
  }
  dm.n_p2_node = static_cast<int>(dm.node_coord.size());

  dm.u_node_essential.assign(dm.n_p2_node, false);
  dm.p_essential.assign(dm.n_vertex, false);
  dm.boundary_edge_midnode.resize(mesh.boundary.size());
  for (size_t e = 0; e < mesh.boundary.size(); ++e) {
    const auto& be = mesh.boundary[e];
    auto it = edge_node.find(edge_key(be.a, be.b));
    if (it == edge_node.end())
      throw std::runtime_error("dofmap: boundary edge not part of any triangle");
    dm.boundary_edge_midnode[e] = it->second;
    const SegmentBc& tags = bc.at(be.label);
    if (tags.displacement == BcKind::Essential) {
      dm.u_node_essential[be.a] = true;
      dm.u_node_essential[be.b] = true;
      dm.u_node_essential[it->second] = true;
    }
    if (tags.pressure == BcKind::Essential) {
      dm.p_essential[be.a] = true;
      dm.p_essential[be.b] = true;
    }
  }

  dm.u_free_index.assign(2 * dm.n_p2_node, -1);
  for (int n = 0; n < dm.n_p2_node; ++n) {
    if (dm.u_node_essential[n]) continue;
    for (int c = 0; c < 2; ++c) {
      dm.u_free_index[2 * n + c] = static_cast<int>(dm.u_free_dofs.size());
      dm.u_free_dofs.push_back(2 * n + c);
    }
  }
  dm.p_free_index.assign(dm.n_vertex, -1);
  for (int v = 0; v < dm.n_vertex; ++v) {
    if (dm.p_essential[v]) continue;
    dm.p_free_index[v] = static_cast<int>(dm.p_free_dofs.size());
    dm.p_free_dofs.push_back(v);
  }
  return dm;
}

Eigen::VectorXd DofMap::embed_p(const Eigen::VectorXd& free) const {
  Eigen::VectorXd full = Eigen::VectorXd::Zero(n_vertex);
  for (int i = 0; i < n_p_free(); ++i) full[p_free_dofs[i]] = free[i];
  return full;
}

Eigen::VectorXd DofMap::restrict_p(const Eigen::VectorXd& full) const {
  Eigen::VectorXd free(n_p_free());
  for (int i = 0; i < n_p_free(); ++i) free[i] = full[p_free_dofs[i]];
  return free;
}

Eigen::VectorXd DofMap::embed_u(const Eigen::VectorXd& free) const {
  Eigen::VectorXd full = Eigen::VectorXd::Zero(2 * n_p2_node);
  for (int i = 0; i < n_u_free(); ++i) full[u_free_dofs[i]] = free[i];
  return full;
}

}  // namespace biot
