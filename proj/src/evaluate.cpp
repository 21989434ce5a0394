#include "biot/evaluate.hpp"

namespace biot {

double u_energy_error_sq(const Mesh& mesh, const DofMap& dofs, double mu,
                         const Eigen::VectorXd& u_free,
                         const std::function<Eigen::Matrix2d(const Eigen::Vector2d&)>& grad_exact) {
  const auto& quad = triangle_rule();
  double total = 0.0;
  for (int tri = 0; tri < mesh.n_triangles(); ++tri) {
    const ElementGeometry geom = element_geometry(mesh, tri);
    const auto& nodes = dofs.tri_nodes[tri];
    for (int q = 0; q < TriangleQuadrature::n_points; ++q) {
      std::array<Eigen::Vector3d, 6> p2g;
      p2_bary_gradients(quad.bary[q], p2g);
      std::array<Eigen::Vector2d, 6> grad;
      for (int a = 0; a < 6; ++a)
        grad[a] = p2g[a][0] * geom.grad_bary[0] + p2g[a][1] * geom.grad_bary[1] +
                  p2g[a][2] * geom.grad_bary[2];

      Eigen::Matrix2d Gh = Eigen::Matrix2d::Zero();  // rows: component, cols: derivative
      for (int a = 0; a < 6; ++a)
        for (int c = 0; c < 2; ++c) {
          const int idx = dofs.u_free_index[2 * nodes[a] + c];
          if (idx >= 0) Gh.row(c) += u_free[idx] * grad[a].transpose();
        }
      if (grad_exact) Gh -= grad_exact(geom.point(quad.bary[q]));
      const Eigen::Matrix2d eps = 0.5 * (Gh + Gh.transpose());
      total += quad.weight[q] * geom.area * 2.0 * mu * eps.squaredNorm();
    }
  }
  return total;
}

double p_energy_error_sq(const Mesh& mesh, const DofMap& dofs, double kappa,
                         const Eigen::VectorXd& p_free,
                         const std::function<Eigen::Vector2d(const Eigen::Vector2d&)>& grad_exact) {
  const auto& quad = triangle_rule();
  const Eigen::VectorXd p_full = dofs.embed_p(p_free);
  double total = 0.0;
  for (int tri = 0; tri < mesh.n_triangles(); ++tri) {
    const ElementGeometry geom = element_geometry(mesh, tri);
    const auto& tv = mesh.triangles[tri];
    Eigen::Vector2d gh = Eigen::Vector2d::Zero();
    for (int i = 0; i < 3; ++i) gh += p_full[tv[i]] * geom.grad_bary[i];
    for (int q = 0; q < TriangleQuadrature::n_points; ++q) {
      Eigen::Vector2d diff = gh;
      if (grad_exact) diff -= grad_exact(geom.point(quad.bary[q]));
      total += quad.weight[q] * geom.area * kappa * diff.squaredNorm();
    }
  }
  return total;
}

double scalar_l2_error_sq(const Mesh& mesh, const Eigen::VectorXd& q_full,
                          const std::function<double(const Eigen::Vector2d&)>& f_exact) {
  const auto& quad = triangle_rule();
  double total = 0.0;
  for (int tri = 0; tri < mesh.n_triangles(); ++tri) {
    const ElementGeometry geom = element_geometry(mesh, tri);
    const auto& tv = mesh.triangles[tri];
    for (int q = 0; q < TriangleQuadrature::n_points; ++q) {
      double val = 0.0;
      for (int i = 0; i < 3; ++i) val += q_full[tv[i]] * quad.bary[q][i];
      if (f_exact) val -= f_exact(geom.point(quad.bary[q]));
      total += quad.weight[q] * geom.area * val * val;
    }
  }
  return total;
}

}  // namespace biot
