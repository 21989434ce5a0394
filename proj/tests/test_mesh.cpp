#include "doctest.h"

#include <algorithm>
#include <sstream>

#include "biot/mesh.hpp"

using namespace biot;

TEST_SUITE("mesh") {

TEST_CASE("unit square counts") {
  const Mesh m1 = unit_square_mesh(1);
  CHECK(m1.n_vertices() == 4);
  CHECK(m1.n_triangles() == 2);
  CHECK(m1.boundary.size() == 4);
  CHECK_NOTHROW(m1.validate());

  const Mesh m2 = unit_square_mesh(2);
  CHECK(m2.n_vertices() == 9);
  CHECK(m2.n_triangles() == 8);
  CHECK(m2.boundary.size() == 8);
  CHECK_NOTHROW(m2.validate());
}

TEST_CASE("unit square partitions the domain") {
  const Mesh m = unit_square_mesh(4);
  CHECK(m.total_area() == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("uniform refinement") {
  const Mesh coarse = unit_square_mesh(1);
  const Mesh fine = refine_uniform(coarse);
  CHECK(fine.n_triangles() == 8);
  CHECK(fine.boundary.size() == 2 * coarse.boundary.size());
  CHECK(fine.total_area() == doctest::Approx(coarse.total_area()).epsilon(1e-15));
  CHECK_NOTHROW(fine.validate());

  // Every child triangle has a quarter of some parent area (uniform mesh:
  // all parents equal).
  for (int t = 0; t < fine.n_triangles(); ++t)
    CHECK(fine.signed_area(t) == doctest::Approx(coarse.signed_area(0) / 4.0).epsilon(1e-14));
}

TEST_CASE("two refinements reproduce the n=4 vertex set") {
  const Mesh refined = refine_uniform(refine_uniform(unit_square_mesh(1)));
  const Mesh direct = unit_square_mesh(4);
  REQUIRE(refined.n_vertices() == direct.n_vertices());

  auto sorted = [](const Mesh& m) {
    std::vector<std::pair<double, double>> pts;
    for (const auto& v : m.vertices) pts.emplace_back(v.x(), v.y());
    std::sort(pts.begin(), pts.end());
    return pts;
  };
  const auto a = sorted(refined), b = sorted(direct);
  for (size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].first == doctest::Approx(b[i].first).epsilon(1e-15));
    CHECK(a[i].second == doctest::Approx(b[i].second).epsilon(1e-15));
  }
}

TEST_CASE("mesh file round trip") {
  const Mesh m = unit_square_mesh(3);
  std::stringstream buffer;
  write_mesh(m, buffer);
  const Mesh back = read_mesh(buffer);
  CHECK(back.n_vertices() == m.n_vertices());
  CHECK(back.n_triangles() == m.n_triangles());
  CHECK(back.boundary.size() == m.boundary.size());
  CHECK(back.total_area() == doctest::Approx(m.total_area()).epsilon(1e-15));
}

TEST_CASE("validation rejects misoriented triangles") {
  Mesh m = unit_square_mesh(1);
  std::swap(m.triangles[0][0], m.triangles[0][1]);
  CHECK_THROWS_WITH_AS(m.validate(), doctest::Contains("triangle 0"), std::runtime_error);
}

TEST_CASE("validation rejects interior boundary edges") {
  Mesh m = unit_square_mesh(1);
  m.boundary.push_back({0, 3, "left"});  // the shared diagonal
  CHECK_THROWS_AS(m.validate(), std::runtime_error);
}

TEST_CASE("read_mesh reports the offending line") {
  std::stringstream bad("v 0 0\nv 1 0\nq 1 2\n");
  CHECK_THROWS_WITH_AS(read_mesh(bad), doctest::Contains("line 3"), std::runtime_error);
}

}  // TEST_SUITE
