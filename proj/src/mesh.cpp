#include "foldylab/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <tuple>

#include <Eigen/Geometry>

namespace foldylab {

namespace {

using EdgeKey = std::pair<int, int>;

// Deduplicates generated vertices by rounding to a fixed lattice.
class VertexPool {
 public:
  explicit VertexPool(double scale) : quantum_(1e-9 * std::max(scale, 1e-300)) {}

  int insert(const Point3& p) {
    const auto key = std::make_tuple(std::llround(p.x() / quantum_), std::llround(p.y() / quantum_),
                                     std::llround(p.z() / quantum_));
    auto [it, inserted] = index_.try_emplace(key, static_cast<int>(points_.size()));
    if (inserted) points_.push_back(p);
    return it->second;
  }

  std::vector<Point3> take() { return std::move(points_); }

 private:
  double quantum_;
  std::map<std::tuple<long long, long long, long long>, int> index_;
  std::vector<Point3> points_;
};

}  // namespace

Panel make_panel(const Point3& a, const Point3& b, const Point3& c) {
  Panel p;
  p.vertices = {a, b, c};
  p.centroid = (a + b + c) / 3.0;
  const Vector3 cross = (b - a).cross(c - a);
  const double twice_area = cross.norm();
  p.area = 0.5 * twice_area;
  p.normal = twice_area > 0.0 ? Vector3(cross / twice_area) : Vector3::Zero();
  p.diameter = std::max({(b - a).norm(), (c - b).norm(), (a - c).norm()});
  return p;
}

SurfaceMesh::SurfaceMesh(std::vector<Point3> vertices, std::vector<Triangle> triangles)
    : vertices_(std::move(vertices)), triangles_(std::move(triangles)) {
  if (triangles_.empty()) throw MeshError("mesh has no triangles");
  const int nv = static_cast<int>(vertices_.size());
  double scale = 0.0;
  for (const auto& v : vertices_) scale = std::max(scale, v.cwiseAbs().maxCoeff());

  panels_.reserve(triangles_.size());
  std::map<EdgeKey, int> directed;
  for (const auto& t : triangles_) {
    for (int k = 0; k < 3; ++k) {
      if (t[k] < 0 || t[k] >= nv) throw MeshError("triangle index out of range");
    }
    panels_.push_back(make_panel(vertices_[t[0]], vertices_[t[1]], vertices_[t[2]]));
    if (!(panels_.back().area > 1e-14 * scale * scale)) {
      throw MeshError("degenerate triangle with non-positive area");
    }
    for (int k = 0; k < 3; ++k) {
      const EdgeKey e{t[k], t[(k + 1) % 3]};
      if (++directed[e] > 1) throw MeshError("inconsistent orientation or non-manifold edge");
    }
  }
  for (const auto& [edge, count] : directed) {
    if (directed.find({edge.second, edge.first}) == directed.end()) {
      throw MeshError("surface is not closed (boundary edge found)");
    }
  }
  if (!(signed_volume() > 0.0)) {
    throw MeshError("normals are not outward (non-positive signed volume)");
  }
}

double SurfaceMesh::area() const {
  double a = 0.0;
  for (const auto& p : panels_) a += p.area;
  return a;
}

double SurfaceMesh::signed_volume() const {
  double v = 0.0;
  for (const auto& p : panels_) {
    v += p.vertices[0].dot(p.vertices[1].cross(p.vertices[2]));
  }
  return v / 6.0;
}

Point3 SurfaceMesh::bounding_center() const {
  Point3 lo = vertices_.front();
  Point3 hi = vertices_.front();
  for (const auto& v : vertices_) {
    lo = lo.cwiseMin(v);
    hi = hi.cwiseMax(v);
  }
  return 0.5 * (lo + hi);
}

double SurfaceMesh::bounding_radius() const {
  const Point3 c = bounding_center();
  double r = 0.0;
  for (const auto& v : vertices_) r = std::max(r, (v - c).norm());
  return r;
}

double SurfaceMesh::max_panel_diameter() const {
  double d = 0.0;
  for (const auto& p : panels_) d = std::max(d, p.diameter);
  return d;
}

SurfaceMesh SurfaceMesh::scaled(double factor) const {
  if (!(factor > 0.0)) throw InvalidArgument("scale factor must be positive");
  auto v = vertices_;
  for (auto& p : v) p *= factor;
  return SurfaceMesh(std::move(v), triangles_);
}

SurfaceMesh SurfaceMesh::translated(const Vector3& shift) const {
  auto v = vertices_;
  for (auto& p : v) p += shift;
  return SurfaceMesh(std::move(v), triangles_);
}

SurfaceMesh SurfaceMesh::rotated(const Eigen::Matrix3d& rotation) const {
  auto v = vertices_;
  for (auto& p : v) p = rotation * p;
  return SurfaceMesh(std::move(v), triangles_);
}

SurfaceMesh SurfaceMesh::refined() const {
  auto v = vertices_;
  std::map<EdgeKey, int> midpoints;
  auto midpoint = [&](int a, int b) {
    const EdgeKey key{std::min(a, b), std::max(a, b)};
    auto it = midpoints.find(key);
    if (it != midpoints.end()) return it->second;
    const int idx = static_cast<int>(v.size());
    v.push_back(0.5 * (vertices_[a] + vertices_[b]));
    midpoints.emplace(key, idx);
    return idx;
  };
  std::vector<Triangle> t;
  t.reserve(4 * triangles_.size());
  for (const auto& tri : triangles_) {
    const int ab = midpoint(tri[0], tri[1]);
    const int bc = midpoint(tri[1], tri[2]);
    const int ca = midpoint(tri[2], tri[0]);
    t.push_back({tri[0], ab, ca});
    t.push_back({ab, tri[1], bc});
    t.push_back({ca, bc, tri[2]});
    t.push_back({ab, bc, ca});
  }
  return SurfaceMesh(std::move(v), std::move(t));
}

SurfaceMesh make_icosphere(int frequency, double radius, const Point3& center, SphereFit fit) {
  if (frequency < 1) throw InvalidArgument("icosphere frequency must be >= 1");
  if (!(radius > 0.0)) throw InvalidArgument("icosphere radius must be positive");
  const double g = 0.5 * (1.0 + std::sqrt(5.0));
  const std::array<Point3, 12> ico = {
      Point3(-1, g, 0), Point3(1, g, 0),   Point3(-1, -g, 0), Point3(1, -g, 0),
      Point3(0, -1, g), Point3(0, 1, g),   Point3(0, -1, -g), Point3(0, 1, -g),
      Point3(g, 0, -1), Point3(g, 0, 1),   Point3(-g, 0, -1), Point3(-g, 0, 1)};
  const std::array<Triangle, 20> faces = {{{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
                                           {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
                                           {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
                                           {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1}}};
  VertexPool pool(1.0);
  std::vector<Triangle> tris;
  tris.reserve(20 * frequency * frequency);
  const int n = frequency;
  for (auto face : faces) {
    Point3 a = ico[face[0]].normalized();
    Point3 b = ico[face[1]].normalized();
    Point3 c = ico[face[2]].normalized();
    if ((b - a).cross(c - a).dot(a + b + c) < 0.0) std::swap(b, c);
    std::vector<int> idx((n + 1) * (n + 1), -1);
    auto at = [&](int i, int j) -> int& { return idx[i * (n + 1) + j]; };
    for (int i = 0; i <= n; ++i) {
      for (int j = 0; i + j <= n; ++j) {
        const Point3 p = a + (static_cast<double>(i) / n) * (b - a) + (static_cast<double>(j) / n) * (c - a);
        at(i, j) = pool.insert(p.normalized());
      }
    }
    for (int i = 0; i < n; ++i) {
      for (int j = 0; i + j < n; ++j) {
        tris.push_back({at(i, j), at(i + 1, j), at(i, j + 1)});
        if (i + j + 1 < n) tris.push_back({at(i + 1, j), at(i + 1, j + 1), at(i, j + 1)});
      }
    }
  }
  auto verts = pool.take();
  double scale = radius;
  if (fit == SphereFit::area_matched) scale *= std::sqrt(4.0 * pi / SurfaceMesh(verts, tris).area());
  for (auto& p : verts) p = center + scale * p;
  return SurfaceMesh(std::move(verts), std::move(tris));
}

SurfaceMesh make_cube_mesh(int n, double side, const Point3& center) {
  if (n < 1) throw InvalidArgument("cube mesh needs at least one square per edge");
  if (!(side > 0.0)) throw InvalidArgument("cube side must be positive");
  VertexPool pool(1.0);
  std::vector<Triangle> tris;
  tris.reserve(12 * n * n);
  for (int axis = 0; axis < 3; ++axis) {
    const int u = (axis + 1) % 3;
    const int v = (axis + 2) % 3;
    for (int sign : {-1, 1}) {
      auto point = [&](int i, int j) {
        Point3 p;
        p[axis] = 0.5 * sign;
        p[u] = -0.5 + static_cast<double>(i) / n;
        p[v] = -0.5 + static_cast<double>(j) / n;
        return pool.insert(p);
      };
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
          const int p00 = point(i, j), p10 = point(i + 1, j), p01 = point(i, j + 1), p11 = point(i + 1, j + 1);
          // (e_u x e_v) = e_axis, so counter-clockwise in (u, v) faces +axis.
          if (sign > 0) {
            tris.push_back({p00, p10, p11});
            tris.push_back({p00, p11, p01});
          } else {
            tris.push_back({p00, p11, p10});
            tris.push_back({p00, p01, p11});
          }
        }
      }
    }
  }
  auto verts = pool.take();
  for (auto& p : verts) p = center + side * p;
  return SurfaceMesh(std::move(verts), std::move(tris));
}

namespace {

bool next_content_line(std::istream& in, std::string& line) {
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r") != std::string::npos) return true;
  }
  return false;
}

}  // namespace

SurfaceMesh read_off(std::istream& in) {
  std::string line;
  if (!next_content_line(in, line)) throw IoError("OFF: empty input");
  {
    std::istringstream probe(line);
    std::string first;
    probe >> first;
    if (first == "OFF") {
      std::string rest;
      std::getline(probe, rest);
      if (rest.find_first_not_of(" \t\r") != std::string::npos) {
        line = rest;
      } else if (!next_content_line(in, line)) {
        throw IoError("OFF: missing counts");
      }
    }
  }
  long nv = -1, nf = -1;
  {
    std::istringstream counts(line);
    if (!(counts >> nv >> nf) || nv < 3 || nf < 1) throw IoError("OFF: bad vertex/triangle counts");
  }
  std::vector<Point3> verts;
  verts.reserve(nv);
  for (long i = 0; i < nv; ++i) {
    if (!next_content_line(in, line)) throw IoError("OFF: truncated vertex list");
    std::istringstream ls(line);
    double x, y, z;
    if (!(ls >> x >> y >> z)) throw IoError("OFF: bad vertex line");
    verts.emplace_back(x, y, z);
  }
  std::vector<Triangle> tris;
  tris.reserve(nf);
  for (long i = 0; i < nf; ++i) {
    if (!next_content_line(in, line)) throw IoError("OFF: truncated face list");
    std::istringstream ls(line);
    std::vector<long> vals;
    long v;
    while (ls >> v) vals.push_back(v);
    if (vals.size() == 4 && vals[0] == 3) vals.erase(vals.begin());
    if (vals.size() != 3) throw IoError("OFF: only triangles are supported");
    tris.push_back({static_cast<int>(vals[0]), static_cast<int>(vals[1]), static_cast<int>(vals[2])});
  }
  return SurfaceMesh(std::move(verts), std::move(tris));
}

SurfaceMesh read_off_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open mesh file: " + path);
  return read_off(in);
}

void write_off(std::ostream& out, const SurfaceMesh& mesh) {
  out << "OFF\n" << mesh.vertices().size() << ' ' << mesh.triangles().size() << " 0\n";
  out.precision(17);
  for (const auto& v : mesh.vertices()) out << v.x() << ' ' << v.y() << ' ' << v.z() << '\n';
  for (const auto& t : mesh.triangles()) out << "3 " << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
}

SurfaceMesh mesh_from_spec(const std::string& spec) {
  auto parts = std::vector<std::string>{};
  {
    std::string cur;
    for (char ch : spec) {
      if (ch == ':') {
        parts.push_back(cur);
        cur.clear();
      } else {
        cur.push_back(ch);
      }
    }
    parts.push_back(cur);
  }
  try {
    if (parts[0] == "icosphere" && parts.size() >= 2) {
      const double r = parts.size() >= 3 ? std::stod(parts[2]) : 1.0;
      return make_icosphere(std::stoi(parts[1]), r);
    }
    if (parts[0] == "cube" && parts.size() >= 2) {
      const double side = parts.size() >= 3 ? std::stod(parts[2]) : 1.0;
      return make_cube_mesh(std::stoi(parts[1]), side);
    }
  } catch (const std::logic_error&) {
    throw InvalidArgument("bad mesh spec: " + spec);
  }
  return read_off_file(spec);
}

}  // namespace foldylab
