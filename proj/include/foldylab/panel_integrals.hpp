#pragma once

#include <array>

#include <Eigen/Core>

#include "foldylab/mesh.hpp"
#include "foldylab/types.hpp"

namespace foldylab {

struct QuadraturePoint {
  Point3 x;
  double weight;
};

/// Degree-5 seven-point rule (Dunavant) mapped to the panel; weights sum to the area.
std::array<QuadraturePoint, 7> seven_point_rule(const Panel& panel);

/// Exact integral of 1/(4 pi |p - y|) over the panel for a point p lying in
/// the panel's plane strictly inside the triangle (the self-term).
double laplace_self_integral(const Panel& panel, const Point3& p);

/// Signed solid angle subtended by the panel at x (positive when the panel
/// normal points away from x).
double solid_angle(const Panel& panel, const Point3& x);

/// Collocation entry of the single layer: integral of Phi_kappa(x, y) over the
/// panel. `self` marks x as the panel's own centroid (analytic static part
/// plus a seven-point rule for the smooth remainder). Otherwise the seven-point
/// rule is used when |x - centroid| < 2 * diameter and the centroid rule beyond.
Complex single_layer_entry(double kappa, const Point3& x, const Panel& panel, bool self);
double laplace_single_layer_entry(const Point3& x, const Panel& panel, bool self);

/// Collocation matrix A_ij = integral over panel j of Phi_kappa(c_i, y) with c_i the
/// centroid of panel i.
Eigen::MatrixXcd assemble_single_layer(double kappa, const std::vector<Panel>& panels);
Eigen::MatrixXd assemble_laplace_single_layer(const std::vector<Panel>& panels);

/// Collocation double layer K_ij = integral over panel j of d/dnu(y) Phi_0(c_i, y),
/// off-diagonal entries by exact solid angles, diagonal from K 1 = -1/2.
Eigen::MatrixXd assemble_laplace_double_layer(const std::vector<Panel>& panels);

}  // namespace foldylab
