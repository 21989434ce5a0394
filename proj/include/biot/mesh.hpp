#ifndef BIOT_MESH_HPP
#define BIOT_MESH_HPP

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace biot {

// Conforming triangulation of a polygonal domain. Triangles are stored
// counterclockwise; boundary edges carry a segment label used to attach
// boundary conditions.
struct Mesh {
  struct BoundaryEdge {
    int a = -1;
    int b = -1;
    std::string label;
  };

  std::vector<Eigen::Vector2d> vertices;
  std::vector<std::array<int, 3>> triangles;
  std::vector<BoundaryEdge> boundary;

  int n_vertices() const { return static_cast<int>(vertices.size()); }
  int n_triangles() const { return static_cast<int>(triangles.size()); }

  double signed_area(int tri) const;
  double total_area() const;
  std::vector<std::string> boundary_labels() const;

  // Checks orientation, boundary-edge/triangle incidence and label
  // connectivity; throws std::runtime_error naming the offending entity.
  void validate() const;
};

// n x n grid of squares, each split bottom-left to top-right, sides
// labeled left/right/bottom/top.
Mesh unit_square_mesh(int n);

// Red refinement: every triangle split into four by its edge midpoints,
// boundary labels inherited.
Mesh refine_uniform(const Mesh& mesh);

// Plain-text format: lines "v x y", "t i j k", "b i j label".
Mesh read_mesh(std::istream& in);
void write_mesh(const Mesh& mesh, std::ostream& out);

}  // namespace biot

#endif
