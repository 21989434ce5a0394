#include "biot/mesh.hpp"

#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace biot {

double Mesh::signed_area(int tri) const {
  const auto& t = triangles[tri];
  const Eigen::Vector2d& a = vertices[t[0]];
  const Eigen::Vector2d& b = vertices[t[1]];
  const Eigen::Vector2d& c = vertices[t[2]];
  return 0.5 * ((b.x() - a.x()) * (c.y() - a.y()) - (c.x() - a.x()) * (b.y() - a.y()));
}

double Mesh::total_area() const {
  double area = 0.0;
  for (int t = 0; t < n_triangles(); ++t) area += signed_area(t);
  return area;
}

std::vector<std::string> Mesh::boundary_labels() const {
  std::set<std::string> labels;
  for (const auto& e : boundary) labels.insert(e.label);
  return {labels.begin(), labels.end()};
}

namespace {
using EdgeKey = std::pair<int, int>;
EdgeKey edge_key(int a, int b) { return {std::min(a, b), std::max(a, b)}; }
}  // namespace

void Mesh::validate() const {
  for (int t = 0; t < n_triangles(); ++t) {
    for (int v : triangles[t])
      if (v < 0 || v >= n_vertices())
        throw std::runtime_error("mesh: triangle " + std::to_string(t) + " references invalid vertex");
    if (!(signed_area(t) > 0.0))
      throw std::runtime_error("mesh: degenerate or misoriented triangle " + std::to_string(t));
  }

  // Count how many triangles share each edge.
  std::map<EdgeKey, int> edge_count;
  for (const auto& t : triangles)
    for (int e = 0; e < 3; ++e) edge_count[edge_key(t[e], t[(e + 1) % 3])]++;

  std::set<EdgeKey> seen;
  for (const auto& be : boundary) {
    const EdgeKey k = edge_key(be.a, be.b);
    auto it = edge_count.find(k);
    if (it == edge_count.end() || it->second != 1)
      throw std::runtime_error("mesh: boundary edge (" + std::to_string(be.a) + "," +
                               std::to_string(be.b) + ") not on the boundary of exactly one triangle");
    if (!seen.insert(k).second)
      throw std::runtime_error("mesh: duplicate boundary edge (" + std::to_string(be.a) + "," +
                               std::to_string(be.b) + ")");
  }
  for (const auto& [k, count] : edge_count)
    if (count == 1 && !seen.count(k))
      throw std::runtime_error("mesh: boundary edge (" + std::to_string(k.first) + "," +
                               std::to_string(k.second) + ") carries no label");

  // Edges of one label must form connected polylines: within a label every
  // vertex may join at most two of its edges.
  std::map<std::string, std::map<int, int>> valence;
  for (const auto& be : boundary) {
    valence[be.label][be.a]++;
    valence[be.label][be.b]++;
  }
  for (const auto& [label, counts] : valence)
    for (const auto& [v, c] : counts)
      if (c > 2)
        throw std::runtime_error("mesh: boundary label '" + label + "' branches at vertex " +
                                 std::to_string(v));
}

Mesh unit_square_mesh(int n) {
  if (n < 1) throw std::invalid_argument("unit_square_mesh: n must be >= 1");
  Mesh mesh;
  const double h = 1.0 / n;
  mesh.vertices.reserve((n + 1) * (n + 1));
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i) mesh.vertices.emplace_back(i * h, j * h);

  auto vid = [n](int i, int j) { return j * (n + 1) + i; };
  mesh.triangles.reserve(2 * n * n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      const int v00 = vid(i, j), v10 = vid(i + 1, j), v01 = vid(i, j + 1), v11 = vid(i + 1, j + 1);
      mesh.triangles.push_back({v00, v10, v11});
      mesh.triangles.push_back({v00, v11, v01});
    }

  for (int i = 0; i < n; ++i) {
    mesh.boundary.push_back({vid(i, 0), vid(i + 1, 0), "bottom"});
    mesh.boundary.push_back({vid(i, n), vid(i + 1, n), "top"});
    mesh.boundary.push_back({vid(0, i), vid(0, i + 1), "left"});
    mesh.boundary.push_back({vid(n, i), vid(n, i + 1), "right"});
  }
  return mesh;
}

Mesh refine_uniform(const Mesh& mesh) {
  Mesh fine;
  fine.vertices = mesh.vertices;

  std::map<EdgeKey, int> midpoint;
  auto mid = [&](int a, int b) {
    const EdgeKey k = edge_key(a, b);
    auto it = midpoint.find(k);
    if (it != midpoint.end()) return it->second;
    const int id = static_cast<int>(fine.vertices.size());
    fine.vertices.push_back(0.5 * (mesh.vertices[a] + mesh.vertices[b]));
    midpoint.emplace(k, id);
    return id;
  };

  fine.triangles.reserve(4 * mesh.triangles.size());
  for (const auto& t : mesh.triangles) {
    const int m01 = mid(t[0], t[1]), m12 = mid(t[1], t[2]), m20 = mid(t[2], t[0]);
    fine.triangles.push_back({t[0], m01, m20});
    fine.triangles.push_back({m01, t[1], m12});
    fine.triangles.push_back({m20, m12, t[2]});
    fine.triangles.push_back({m01, m12, m20});
  }

  fine.boundary.reserve(2 * mesh.boundary.size());
  for (const auto& be : mesh.boundary) {
    const int m = mid(be.a, be.b);
    fine.boundary.push_back({be.a, m, be.label});
    fine.boundary.push_back({m, be.b, be.label});
  }
  return fine;
}

Mesh read_mesh(std::istream& in) {
  Mesh mesh;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag) || tag[0] == '#') continue;
    if (tag == "v") {
      double x, y;
      if (!(ls >> x >> y)) throw std::runtime_error("mesh line " + std::to_string(lineno) + ": bad vertex");
      mesh.vertices.emplace_back(x, y);
    } else if (tag == "t") {
      int i, j, k;
      if (!(ls >> i >> j >> k)) throw std::runtime_error("mesh line " + std::to_string(lineno) + ": bad triangle");
      mesh.triangles.push_back({i, j, k});
    } else if (tag == "b") {
      Mesh::BoundaryEdge be;
      if (!(ls >> be.a >> be.b >> be.label))
        throw std::runtime_error("mesh line " + std::to_string(lineno) + ": bad boundary edge");
      mesh.boundary.push_back(be);
    } else {
      throw std::runtime_error("mesh line " + std::to_string(lineno) + ": unknown tag '" + tag + "'");
    }
  }
  mesh.validate();
  return mesh;
}

void write_mesh(const Mesh& mesh, std::ostream& out) {
  out.precision(17);
  for (const auto& v : mesh.vertices) out << "v " << v.x() << " " << v.y() << "\n";
  for (const auto& t : mesh.triangles) out << "t " << t[0] << " " << t[1] << " " << t[2] << "\n";
  for (const auto& b : mesh.boundary) out << "b " << b.a << " " << b.b << " " << b.label << "\n";
}

}  // namespace biot
