#pragma once

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "foldylab/types.hpp"

namespace foldylab {

/// Flat triangular panel with cached geometric data.
struct Panel {
  std::array<Point3, 3> vertices;
  Point3 centroid;
  Vector3 normal;  // unit, outward for a valid mesh
  double area = 0.0;
  double diameter = 0.0;  // longest edge
};

using Triangle = std::array<int, 3>;

/// Closed, consistently oriented triangulated surface with outward normals.
/// The constructor validates the topology and throws MeshError on failure.
class SurfaceMesh {
 public:
  SurfaceMesh(std::vector<Point3> vertices, std::vector<Triangle> triangles);

  const std::vector<Point3>& vertices() const { return vertices_; }
  const std::vector<Triangle>& triangles() const { return triangles_; }
  const std::vector<Panel>& panels() const { return panels_; }
  std::size_t size() const { return panels_.size(); }

  double area() const;
  double signed_volume() const;
  /// Centroid of the vertex bounding box and the radius of the enclosing sphere about it.
  Point3 bounding_center() const;
  double bounding_radius() const;
  double max_panel_diameter() const;

  SurfaceMesh scaled(double factor) const;
  SurfaceMesh translated(const Vector3& shift) const;
  SurfaceMesh rotated(const Eigen::Matrix3d& rotation) const;
  /// Flat midpoint subdivision: every triangle becomes four.
  SurfaceMesh refined() const;

 private:
  std::vector<Point3> vertices_;
  std::vector<Triangle> triangles_;
  std::vector<Panel> panels_;
};

Panel make_panel(const Point3& a, const Point3& b, const Point3& c);

/// Where the flat panels sit relative to the sphere. An inscribed mesh has its
/// vertices on the sphere and loses O(h^2) of the area; an area-matched mesh is
/// the inscribed one scaled so the panel areas sum to 4 pi R^2.
enum class SphereFit { inscribed, area_matched };

/// Geodesic sphere: each icosahedron face split into frequency^2 triangles,
/// vertices projected to the sphere. 20 f^2 panels, 10 f^2 + 2 vertices.
SurfaceMesh make_icosphere(int frequency, double radius = 1.0,
                           const Point3& center = Point3::Zero(), SphereFit fit = SphereFit::inscribed);

/// Axis-aligned cube with n x n squares (two triangles each) per face: 12 n^2 panels.
SurfaceMesh make_cube_mesh(int n_per_edge, double side = 1.0,
                           const Point3& center = Point3::Zero());

/// OFF-style text: optional "OFF" line, then "n_vertices n_triangles [n_edges]",
/// coordinates, and index triples (an optional leading "3" per face is accepted).
SurfaceMesh read_off(std::istream& in);
SurfaceMesh read_off_file(const std::string& path);
void write_off(std::ostream& out, const SurfaceMesh& mesh);

/// Parses a mesh argument: "icosphere:<frequency>[:<radius>]", "cube:<n>[:<side>]"
/// or a path to an OFF file.
SurfaceMesh mesh_from_spec(const std::string& spec);

}  // namespace foldylab
