#include "foldylab/panel_integrals.hpp"

#include <cmath>

#include <Eigen/Geometry>

#include "foldylab/greens.hpp"

namespace foldylab {

namespace {

constexpr double near_factor = 2.0;
// Pairs at the threshold up to rounding are treated as far so the split does not
// depend on how the mesh is oriented.
constexpr double near_slack = 1e-9;

struct Barycentric {
  double l0, l1, l2, w;
};

constexpr std::array<Barycentric, 7> dunavant5 = {{
    {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0, 0.225},
    {0.059715871789770, 0.470142064105115, 0.470142064105115, 0.132394152788506},
    {0.470142064105115, 0.059715871789770, 0.470142064105115, 0.132394152788506},
    {0.470142064105115, 0.470142064105115, 0.059715871789770, 0.132394152788506},
    {0.797426985353087, 0.101286507323456, 0.101286507323456, 0.125939180544827},
    {0.101286507323456, 0.797426985353087, 0.101286507323456, 0.125939180544827},
    {0.101286507323456, 0.101286507323456, 0.797426985353087, 0.125939180544827},
}};

}  // namespace

std::array<QuadraturePoint, 7> seven_point_rule(const Panel& p) {
  std::array<QuadraturePoint, 7> out;
  for (std::size_t q = 0; q < dunavant5.size(); ++q) {
    const auto& b = dunavant5[q];
    out[q].x = b.l0 * p.vertices[0] + b.l1 * p.vertices[1] + b.l2 * p.vertices[2];
    out[q].weight = b.w * p.area;
  }
  return out;
}

double laplace_self_integral(const Panel& panel, const Point3& p) {
  // Split into three triangles with apex p; each contributes
  // h [asinh(t2/h) - asinh(t1/h)] with h the distance from p to the edge line.
  double sum = 0.0;
  for (int e = 0; e < 3; ++e) {
    const Point3& a = panel.vertices[e];
    const Point3& b = panel.vertices[(e + 1) % 3];
    const Vector3 u = (b - a).normalized();
    const double t1 = (a - p).dot(u);
    const double t2 = (b - p).dot(u);
    const double h = ((a - p) - t1 * u).norm();
    if (h > 0.0) sum += h * (std::asinh(t2 / h) - std::asinh(t1 / h));
  }
  return sum / four_pi;
}

double solid_angle(const Panel& panel, const Point3& x) {
  const Vector3 r1 = panel.vertices[0] - x;
  const Vector3 r2 = panel.vertices[1] - x;
  const Vector3 r3 = panel.vertices[2] - x;
  const double n1 = r1.norm(), n2 = r2.norm(), n3 = r3.norm();
  const double num = r1.dot(r2.cross(r3));
  const double den = n1 * n2 * n3 + r1.dot(r2) * n3 + r1.dot(r3) * n2 + r2.dot(r3) * n1;
  return 2.0 * std::atan2(num, den);
}

Complex single_layer_entry(double kappa, const Point3& x, const Panel& panel, bool self) {
  if (self) {
    Complex smooth = 0.0;
    if (kappa != 0.0) {
      for (const auto& q : seven_point_rule(panel)) {
        smooth += q.weight * greens::p_smooth_of_distance(kappa, (q.x - x).norm());
      }
    }
    return laplace_self_integral(panel, x) + smooth;
  }
  const double dist = (x - panel.centroid).norm();
  if (dist < near_factor * panel.diameter * (1.0 - near_slack)) {
    Complex sum = 0.0;
    for (const auto& q : seven_point_rule(panel)) {
      sum += q.weight * greens::phi_of_distance(kappa, (q.x - x).norm());
    }
    return sum;
  }
  return panel.area * greens::phi_of_distance(kappa, dist);
}

double laplace_single_layer_entry(const Point3& x, const Panel& panel, bool self) {
  if (self) return laplace_self_integral(panel, x);
  const double dist = (x - panel.centroid).norm();
  if (dist < near_factor * panel.diameter * (1.0 - near_slack)) {
    double sum = 0.0;
    for (const auto& q : seven_point_rule(panel)) sum += q.weight / (four_pi * (q.x - x).norm());
    return sum;
  }
  return panel.area / (four_pi * dist);
}

Eigen::MatrixXcd assemble_single_layer(double kappa, const std::vector<Panel>& panels) {
  const auto n = static_cast<Eigen::Index>(panels.size());
  Eigen::MatrixXcd a(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      a(i, j) = single_layer_entry(kappa, panels[i].centroid, panels[j], i == j);
    }
  }
  return a;
}

Eigen::MatrixXd assemble_laplace_single_layer(const std::vector<Panel>& panels) {
  const auto n = static_cast<Eigen::Index>(panels.size());
  Eigen::MatrixXd a(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      a(i, j) = laplace_single_layer_entry(panels[i].centroid, panels[j], i == j);
    }
  }
  return a;
}

Eigen::MatrixXd assemble_laplace_double_layer(const std::vector<Panel>& panels) {
  // d/dnu(y) Phi_0(x, y) = nu.(x - y) / (4 pi |x - y|^3), whose panel integral is
  // -Omega(x) / (4 pi) with Omega the signed solid angle.
  const auto n = static_cast<Eigen::Index>(panels.size());
  Eigen::MatrixXd k(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    double row = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i == j) continue;
      k(i, j) = -solid_angle(panels[j], panels[i].centroid) / four_pi;
      row += k(i, j);
    }
    k(i, i) = -0.5 - row;
  }
  return k;
}

}  // namespace foldylab
