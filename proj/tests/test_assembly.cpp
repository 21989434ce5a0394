#include "doctest.h"

#include <random>

#include "biot/assembly.hpp"
#include "biot/evaluate.hpp"
#include "biot/fem.hpp"

using namespace biot;

namespace {

BoundaryConfig uniform_bc(BcKind u, BcKind p) {
  BoundaryConfig bc;
  for (const char* side : {"left", "right", "bottom", "top"}) bc.segments[side] = {u, p};
  return bc;
}

OperatorSet make_ops(int n, const BoundaryConfig& bc, MaterialParams params = {}) {
  const Mesh mesh = unit_square_mesh(n);
  return assemble_operators(mesh, params, select_spaces(bc, params), bc);
}

Eigen::VectorXd random_vector(int n, unsigned seed) {
  std::mt19937 gen(seed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v[i] = unif(gen);
  return v;
}

}  // namespace

TEST_SUITE("assembly") {

TEST_CASE("quadrature rule integrates monomials up to degree 5 exactly") {
  // Reference triangle (0,0)-(1,0)-(0,1): int x^a y^b = a! b! / (a+b+2)!.
  auto exact = [](int a, int b) {
    auto fact = [](int k) {
      double f = 1.0;
      for (int i = 2; i <= k; ++i) f *= i;
      return f;
    };
    return fact(a) * fact(b) / fact(a + b + 2);
  };
  const auto& rule = triangle_rule();
  for (int a = 0; a + 0 <= 5; ++a)
    for (int b = 0; a + b <= 5; ++b) {
      double sum = 0.0;
      for (int q = 0; q < TriangleQuadrature::n_points; ++q) {
        const double x = rule.bary[q][1], y = rule.bary[q][2];
        sum += rule.weight[q] * std::pow(x, a) * std::pow(y, b);
      }
      sum *= 0.5;  // reference area
      CHECK(sum == doctest::Approx(exact(a, b)).epsilon(1e-13));
    }
}

TEST_CASE("pure natural displacement leaves exactly the rigid motions in the kernel") {
  MaterialParams params;
  params.sigma = 1.0;
  const OperatorSet ops = make_ops(4, uniform_bc(BcKind::Natural, BcKind::Essential), params);
  REQUIRE(ops.rigid_modes.size() == 3);
  for (const auto& mode : ops.rigid_modes)
    CHECK((ops.elasticity * mode).norm() < 1e-12 * mode.norm());

  // Dimension of the kernel is exactly three: the fourth-smallest
  // eigenvalue of E is bounded away from zero.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(Eigen::MatrixXd(ops.elasticity));
  CHECK(eig.eigenvalues()[2] < 1e-12);
  CHECK(eig.eigenvalues()[3] > 1e-6);
}

TEST_CASE("constant pressure lies in the stiffness kernel without essential dofs") {
  MaterialParams params;
  params.sigma = 1.0;
  const OperatorSet ops = make_ops(4, uniform_bc(BcKind::Essential, BcKind::Natural), params);
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(ops.pressure_stiffness.rows());
  CHECK((ops.pressure_stiffness * ones).norm() < 1e-12);
}

TEST_CASE("divergence pairing reproduces the divergence theorem") {
  // u = (x, 0) interpolated exactly by P2; pairing with the constant
  // scalar equals the integral of div u over the unit square.
  MaterialParams params;
  params.sigma = 1.0;
  const BoundaryConfig bc = uniform_bc(BcKind::Natural, BcKind::Natural);
  const Mesh mesh = unit_square_mesh(3);
  const OperatorSet ops = assemble_operators(mesh, params, select_spaces(bc, params), bc);
  const Eigen::VectorXd u = interpolate_u(
      ops.dofmap(), [](const Eigen::Vector2d& x) { return Eigen::Vector2d(x.x(), 0.0); });
  const Eigen::VectorXd pairing = ops.divergence * u;
  CHECK(pairing.sum() == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("discrete norm identities hold for random coefficient vectors") {
  MaterialParams params;
  params.mu = 2.5;
  params.kappa = 0.7;
  params.sigma = 1.0;
  const BoundaryConfig bc = uniform_bc(BcKind::Essential, BcKind::Essential);
  const Mesh mesh = unit_square_mesh(4);
  const OperatorSet ops = assemble_operators(mesh, params, select_spaces(bc, params), bc);

  for (unsigned seed : {1u, 2u, 3u}) {
    const Eigen::VectorXd v = random_vector(ops.dofmap().n_u_free(), seed);
    const double via_matrix = v.dot(ops.elasticity * v);
    const double via_quadrature = u_energy_error_sq(mesh, ops.dofmap(), params.mu, v, nullptr);
    CHECK(via_matrix == doctest::Approx(via_quadrature).epsilon(1e-10));

    const Eigen::VectorXd n = random_vector(ops.dofmap().n_p_free(), seed + 10);
    const double l_matrix = n.dot(ops.pressure_stiffness * n);
    const double l_quadrature = p_energy_error_sq(mesh, ops.dofmap(), params.kappa, n, nullptr);
    CHECK(l_matrix == doctest::Approx(l_quadrature).epsilon(1e-10));
  }
}

TEST_CASE("mass matrix is positive definite and consistent with the area") {
  MaterialParams params;
  params.sigma = 1.0;
  const OperatorSet ops = make_ops(3, uniform_bc(BcKind::Essential, BcKind::Natural), params);
  CHECK(ops.area == doctest::Approx(1.0).epsilon(1e-14));
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(ops.mass.rows());
  CHECK(ones.dot(ops.mass * ones) == doctest::Approx(1.0).epsilon(1e-14));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(Eigen::MatrixXd(ops.mass));
  CHECK(eig.eigenvalues().minCoeff() > 0.0);
}

TEST_CASE("mean projection behavior") {
  MaterialParams params;
  params.sigma = 0.0;
  const BoundaryConfig bc = uniform_bc(BcKind::Essential, BcKind::Essential);
  SUBCASE("constants on a coarse mesh") {
    const OperatorSet ops = make_ops(3, bc, params);
    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(ops.mass.rows());
    CHECK(apply_PD(ones, ops.spaces, ops).norm() < 1e-14);

    Eigen::VectorXd zero_mean = random_vector(ops.mass.rows(), 5);
    zero_mean = apply_PD(zero_mean, ops.spaces, ops);
    CHECK((apply_PD(zero_mean, ops.spaces, ops) - zero_mean).norm() < 1e-14);
  }

  SUBCASE("mean removal of 1 + cos(pi x) on a fine mesh") {
    const Mesh mesh = unit_square_mesh(32);
    const OperatorSet ops = assemble_operators(mesh, params, select_spaces(bc, params), bc);
    const Eigen::VectorXd q =
        interpolate_p1(mesh, [](const Eigen::Vector2d& x) { return 1.0 + std::cos(M_PI * x.x()); });
    const Eigen::VectorXd expected =
        interpolate_p1(mesh, [](const Eigen::Vector2d& x) { return std::cos(M_PI * x.x()); });
    const Eigen::VectorXd projected = apply_PD(q, ops.spaces, ops);
    CHECK((projected - expected).cwiseAbs().maxCoeff() < 1e-2);  // interpolated mean is O(h^2)
  }
}

TEST_CASE("projections are idempotent and mass-self-adjoint") {
  MaterialParams params;
  params.sigma = 0.0;
  const OperatorSet ops = make_ops(4, uniform_bc(BcKind::Essential, BcKind::Natural), params);
  const Eigen::VectorXd q1 = random_vector(ops.mass.rows(), 21);
  const Eigen::VectorXd q2 = random_vector(ops.mass.rows(), 22);

  for (auto apply : {apply_PD, apply_PPbar}) {
    const Eigen::VectorXd once = apply(q1, ops.spaces, ops);
    CHECK((apply(once, ops.spaces, ops) - once).cwiseAbs().maxCoeff() < 1e-12);
    const double left = apply(q1, ops.spaces, ops).dot(ops.mass * q2);
    const double right = q1.dot(ops.mass * apply(q2, ops.spaces, ops));
    CHECK(left == doctest::Approx(right).epsilon(1e-12));
  }
}

TEST_CASE("load assembly") {
  MaterialParams params;
  params.sigma = 1.0;
  const BoundaryConfig bc = uniform_bc(BcKind::Natural, BcKind::Natural);
  const Mesh mesh = unit_square_mesh(3);
  const OperatorSet ops = assemble_operators(mesh, params, select_spaces(bc, params), bc);
  const DofMap& dofs = ops.dofmap();

  SUBCASE("zero data gives zero vectors") {
    const LoadVectors loads = assemble_loads(mesh, dofs, bc, FieldData{}, 0.0);
    CHECK(loads.lu.norm() == 0.0);
    CHECK(loads.lp.norm() == 0.0);
  }

  SUBCASE("unit volume source pairs to the volume") {
    FieldData data;
    data.f_p = [](const Eigen::Vector2d&, double) { return 1.0; };
    const LoadVectors loads = assemble_loads(mesh, dofs, bc, data, 0.0);
    CHECK(loads.lp.sum() == doctest::Approx(1.0).epsilon(1e-13));
  }

  SUBCASE("unit flux on the right edge pairs to the edge length") {
    FieldData data;
    data.g_p["right"] = [](const Eigen::Vector2d&, double) { return 1.0; };
    const LoadVectors loads = assemble_loads(mesh, dofs, bc, data, 0.0);
    CHECK(loads.lp.sum() == doctest::Approx(1.0).epsilon(1e-13));
  }

  SUBCASE("boundary data on an essential segment is rejected") {
    BoundaryConfig mixed = bc;
    mixed.segments["right"].pressure = BcKind::Essential;
    const OperatorSet ops2 = assemble_operators(mesh, params, select_spaces(mixed, params), mixed);
    FieldData data;
    data.g_p["right"] = [](const Eigen::Vector2d&, double) { return 1.0; };
    CHECK_THROWS_AS(assemble_loads(mesh, ops2.dofmap(), mixed, data, 0.0), std::invalid_argument);
  }
}

TEST_CASE("degenerate triangles are reported with their id") {
  Mesh mesh = unit_square_mesh(2);
  mesh.vertices[4] = mesh.vertices[1];  // collapse an interior vertex
  MaterialParams params;
  params.sigma = 1.0;
  const BoundaryConfig bc = uniform_bc(BcKind::Essential, BcKind::Natural);
  CHECK_THROWS_WITH_AS(assemble_operators(mesh, params, select_spaces(bc, params), bc),
                       doctest::Contains("triangle"), std::runtime_error);
}

}  // TEST_SUITE
