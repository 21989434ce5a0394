#include "biot/assembly.hpp"

#include <stdexcept>

#include <Eigen/SparseCholesky>

namespace biot {

using Triplet = Eigen::Triplet<double>;

OperatorSet assemble_operators(const Mesh& mesh, const MaterialParams& params,
                               const SpaceConfig& spaces, const BoundaryConfig& bc) {
  params.validate();
  mesh.validate();
  auto dofs = std::make_shared<DofMap>(build_dofmap(mesh, bc));

  OperatorSet ops;
  ops.spaces = spaces;
  ops.params = params;
  ops.dofs = dofs;
  ops.mesh = std::make_shared<Mesh>(mesh);

  const int n1 = dofs->n_scalar();
  const int nu = dofs->n_u_free();
  const int npf = dofs->n_p_free();
  const auto& quad = triangle_rule();

  std::vector<Triplet> tE, tB, tL, tM, tMu;
  ops.mean_vec = Eigen::VectorXd::Zero(n1);

  for (int tri = 0; tri < mesh.n_triangles(); ++tri) {
    const ElementGeometry geom = element_geometry(mesh, tri);
    const auto& t = mesh.triangles[tri];
    const auto& nodes = dofs->tri_nodes[tri];

    // P1 mass (exact) and stiffness (constant gradients).
    for (int i = 0; i < 3; ++i) {
      ops.mean_vec[t[i]] += geom.area / 3.0;
      for (int j = 0; j < 3; ++j) {
        tM.emplace_back(t[i], t[j], geom.area * (i == j ? 1.0 / 6.0 : 1.0 / 12.0));
        const int pi = dofs->p_free_index[t[i]];
        const int pj = dofs->p_free_index[t[j]];
        if (pi >= 0 && pj >= 0)
          tL.emplace_back(pi, pj,
                          params.kappa * geom.area * geom.grad_bary[i].dot(geom.grad_bary[j]));
      }
    }

    // Quadrature loop for the P2 blocks.
    for (int q = 0; q < TriangleQuadrature::n_points; ++q) {
      std::array<double, 6> p2v;
      std::array<Eigen::Vector3d, 6> p2g;
      std::array<double, 3> p1v;
      p2_values(quad.bary[q], p2v);
      p2_bary_gradients(quad.bary[q], p2g);
      p1_values(quad.bary[q], p1v);
      const double w = quad.weight[q] * geom.area;

      std::array<Eigen::Vector2d, 6> grad;  // physical gradient of scalar P2 basis
      for (int a = 0; a < 6; ++a)
        grad[a] = p2g[a][0] * geom.grad_bary[0] + p2g[a][1] * geom.grad_bary[1] +
                  p2g[a][2] * geom.grad_bary[2];

      for (int a = 0; a < 6; ++a) {
        const int na = nodes[a];
        for (int ca = 0; ca < 2; ++ca) {
          const int ia = dofs->u_free_index[2 * na + ca];
          if (ia < 0) continue;
          // Divergence coupling with the P1 test functions.
          for (int i = 0; i < 3; ++i) tB.emplace_back(t[i], ia, w * p1v[i] * grad[a][ca]);
          // Elasticity: 2 mu eps(phi):eps(psi).
          for (int b = 0; b < 6; ++b) {
            const int nb = nodes[b];
            for (int cb = 0; cb < 2; ++cb) {
              const int ib = dofs->u_free_index[2 * nb + cb];
              if (ib < 0 || ib > ia) continue;  // lower triangle, mirrored below
              // eps(u)_kl for basis (a,ca): 0.5*(d_k u_l + d_l u_k) with
              // u_l = delta_{l,ca} phi_a.
              double val = 0.0;
              for (int k = 0; k < 2; ++k)
                for (int l = 0; l < 2; ++l) {
                  const double ea = 0.5 * ((l == ca ? grad[a][k] : 0.0) + (k == ca ? grad[a][l] : 0.0));
                  const double eb = 0.5 * ((l == cb ? grad[b][k] : 0.0) + (k == cb ? grad[b][l] : 0.0));
                  val += ea * eb;
                }
              val *= 2.0 * params.mu * w;
              tE.emplace_back(ia, ib, val);
              if (ib != ia) tE.emplace_back(ib, ia, val);
            }
          }
          if (spaces.u_quotient_rigid_motions) {
            for (int b = 0; b < 6; ++b) {
              const int ib = dofs->u_free_index[2 * nodes[b] + ca];
              if (ib < 0) continue;
              tMu.emplace_back(ia, ib, w * p2v[a] * p2v[b]);
            }
          }
        }
      }
    }
  }

  ops.elasticity.resize(nu, nu);
  ops.elasticity.setFromTriplets(tE.begin(), tE.end());
  ops.divergence.resize(n1, nu);
  ops.divergence.setFromTriplets(tB.begin(), tB.end());
  ops.pressure_stiffness.resize(npf, npf);
  ops.pressure_stiffness.setFromTriplets(tL.begin(), tL.end());
  ops.mass.resize(n1, n1);
  ops.mass.setFromTriplets(tM.begin(), tM.end());
  ops.area = ops.mean_vec.sum();

  // Restrictions of the mass matrix to the pressure test space.
  {
    std::vector<Triplet> tpp, tpf;
    for (int k = 0; k < ops.mass.outerSize(); ++k)
      for (SpMat::InnerIterator it(ops.mass, k); it; ++it) {
        const int ri = dofs->p_free_index[it.row()];
        if (ri < 0) continue;
        tpf.emplace_back(ri, static_cast<int>(it.col()), it.value());
        const int ci = dofs->p_free_index[it.col()];
        if (ci >= 0) tpp.emplace_back(ri, ci, it.value());
      }
    ops.mass_pp.resize(npf, npf);
    ops.mass_pp.setFromTriplets(tpp.begin(), tpp.end());
    ops.mass_pfull.resize(npf, n1);
    ops.mass_pfull.setFromTriplets(tpf.begin(), tpf.end());
  }

  if (spaces.u_quotient_rigid_motions) {
    ops.u_mass.resize(nu, nu);
    ops.u_mass.setFromTriplets(tMu.begin(), tMu.end());
    ops.rigid_modes.resize(3, Eigen::VectorXd::Zero(nu));
    for (int node = 0; node < dofs->n_p2_node; ++node) {
      const Eigen::Vector2d x = dofs->node_coord[node];
      const int ix = dofs->u_free_index[2 * node];
      const int iy = dofs->u_free_index[2 * node + 1];
      if (ix >= 0) {
        ops.rigid_modes[0][ix] = 1.0;
        ops.rigid_modes[2][ix] = -x.y();
      }
      if (iy >= 0) {
        ops.rigid_modes[1][iy] = 1.0;
        ops.rigid_modes[2][iy] = x.x();
      }
    }
  }
  return ops;
}

namespace {

Eigen::VectorXd subtract_mean(const Eigen::VectorXd& q, const OperatorSet& ops) {
  const double mean = ops.mean_vec.dot(q) / ops.area;
  return q - mean * Eigen::VectorXd::Ones(q.size());
}

}  // namespace

Eigen::VectorXd apply_PD(const Eigen::VectorXd& q, const SpaceConfig& spaces,
                         const OperatorSet& ops) {
  if (q.size() != ops.mean_vec.size()) throw std::invalid_argument("apply_PD: size mismatch");
  return spaces.D_zero_mean ? subtract_mean(q, ops) : q;
}

Eigen::VectorXd apply_PPbar(const Eigen::VectorXd& q, const SpaceConfig& spaces,
                            const OperatorSet& ops) {
  if (q.size() != ops.mean_vec.size()) throw std::invalid_argument("apply_PPbar: size mismatch");
  return spaces.Pbar_zero_mean ? subtract_mean(q, ops) : q;
}

const Eigen::SimplicialLDLT<SpMat>& OperatorSet::mass_solver() const {
  if (!mass_factor_) mass_factor_ = std::make_shared<Eigen::SimplicialLDLT<SpMat>>(mass);
  return *mass_factor_;
}

Eigen::VectorXd project_divergence(const Eigen::VectorXd& u, const OperatorSet& ops) {
  return ops.mass_solver().solve(ops.divergence * u);
}

LoadVectors assemble_loads(const Mesh& mesh, const DofMap& dofs, const BoundaryConfig& bc,
                           const FieldData& data, double t) {
  for (const auto& [label, fn] : data.g_u)
    if (bc.at(label).displacement != BcKind::Natural)
      throw std::invalid_argument("assemble_loads: displacement boundary data on essential segment '" +
                                  label + "'");
  for (const auto& [label, fn] : data.g_p)
    if (bc.at(label).pressure != BcKind::Natural)
      throw std::invalid_argument("assemble_loads: pressure boundary data on essential segment '" +
                                  label + "'");

  LoadVectors loads;
  loads.lu = Eigen::VectorXd::Zero(dofs.n_u_free());
  loads.lp = Eigen::VectorXd::Zero(dofs.n_p_free());
  const auto& quad = triangle_rule();

  if (data.f_u || data.f_p) {
    for (int tri = 0; tri < mesh.n_triangles(); ++tri) {
      const ElementGeometry geom = element_geometry(mesh, tri);
      const auto& tv = mesh.triangles[tri];
      const auto& nodes = dofs.tri_nodes[tri];
      for (int q = 0; q < TriangleQuadrature::n_points; ++q) {
        const Eigen::Vector2d x = geom.point(quad.bary[q]);
        const double w = quad.weight[q] * geom.area;
        if (data.f_u) {
          const Eigen::Vector2d f = data.f_u(x, t);
          std::array<double, 6> p2v;
          p2_values(quad.bary[q], p2v);
          for (int a = 0; a < 6; ++a)
            for (int c = 0; c < 2; ++c) {
              const int ia = dofs.u_free_index[2 * nodes[a] + c];
              if (ia >= 0) loads.lu[ia] += w * p2v[a] * f[c];
            }
        }
        if (data.f_p) {
          const double f = data.f_p(x, t);
          std::array<double, 3> p1v;
          p1_values(quad.bary[q], p1v);
          for (int i = 0; i < 3; ++i) {
            const int pi = dofs.p_free_index[tv[i]];
            if (pi >= 0) loads.lp[pi] += w * p1v[i] * f;
          }
        }
      }
    }
  }

  if (!data.g_u.empty() || !data.g_p.empty()) {
    const auto& erule = edge_rule();
    for (size_t e = 0; e < mesh.boundary.size(); ++e) {
      const auto& be = mesh.boundary[e];
      const auto gu = data.g_u.find(be.label);
      const auto gp = data.g_p.find(be.label);
      if (gu == data.g_u.end() && gp == data.g_p.end()) continue;
      const Eigen::Vector2d a = mesh.vertices[be.a];
      const Eigen::Vector2d b = mesh.vertices[be.b];
      const double len = (b - a).norm();
      const int mid = dofs.boundary_edge_midnode[e];
      for (int q = 0; q < EdgeQuadrature::n_points; ++q) {
        const double s = erule.point[q];
        const Eigen::Vector2d x = (1 - s) * a + s * b;
        const double w = erule.weight[q] * len;
        if (gu != data.g_u.end()) {
          const Eigen::Vector2d g = gu->second(x, t);
          // Trace of the P2 basis along the edge: endpoint functions
          // (1-s)(1-2s), s(2s-1) and midpoint bubble 4s(1-s).
          const double va = (1 - s) * (1 - 2 * s), vb = s * (2 * s - 1), vm = 4 * s * (1 - s);
          const std::array<std::pair<int, double>, 3> trace = {
              std::make_pair(be.a, va), std::make_pair(be.b, vb), std::make_pair(mid, vm)};
          for (const auto& [node, val] : trace)
            for (int c = 0; c < 2; ++c) {
              const int ia = dofs.u_free_index[2 * node + c];
              if (ia >= 0) loads.lu[ia] += w * val * g[c];
            }
        }
        if (gp != data.g_p.end()) {
          const double g = gp->second(x, t);
          const int pa = dofs.p_free_index[be.a];
          const int pb = dofs.p_free_index[be.b];
          if (pa >= 0) loads.lp[pa] += w * (1 - s) * g;
          if (pb >= 0) loads.lp[pb] += w * s * g;
        }
      }
    }
  }
  return loads;
}

Eigen::VectorXd project_scalar_field(const Mesh& mesh, const OperatorSet& ops,
                                     const std::function<double(const Eigen::Vector2d&)>& f) {
  const auto& quad = triangle_rule();
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(mesh.n_vertices());
  for (int tri = 0; tri < mesh.n_triangles(); ++tri) {
    const ElementGeometry geom = element_geometry(mesh, tri);
    const auto& tv = mesh.triangles[tri];
    for (int q = 0; q < TriangleQuadrature::n_points; ++q) {
      const Eigen::Vector2d x = geom.point(quad.bary[q]);
      const double w = quad.weight[q] * geom.area * f(x);
      for (int i = 0; i < 3; ++i) rhs[tv[i]] += w * quad.bary[q][i];
    }
  }
  return ops.mass_solver().solve(rhs);
}

Eigen::VectorXd interpolate_p1(const Mesh& mesh,
                               const std::function<double(const Eigen::Vector2d&)>& f) {
  Eigen::VectorXd v(mesh.n_vertices());
  for (int i = 0; i < mesh.n_vertices(); ++i) v[i] = f(mesh.vertices[i]);
  return v;
}

Eigen::VectorXd interpolate_u(const DofMap& dofs,
                              const std::function<Eigen::Vector2d(const Eigen::Vector2d&)>& f) {
  Eigen::VectorXd v(dofs.n_u_free());
  for (int i = 0; i < dofs.n_u_free(); ++i) {
    const int dof = dofs.u_free_dofs[i];
    const Eigen::Vector2d val = f(dofs.node_coord[dof / 2]);
    v[i] = val[dof % 2];
  }
  return v;
}

}  // namespace biot
