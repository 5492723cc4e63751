#pragma once

#include <vector>

#include "foldylab/directions.hpp"
#include "foldylab/far_field.hpp"
#include "foldylab/mesh.hpp"
#include "foldylab/types.hpp"

namespace foldylab {

/// Positioned sound-soft obstacles hit by the plane wave amplitude * e^{i kappa x.theta}.
struct MultiBodyScene {
  std::vector<SurfaceMesh> bodies;
  double kappa = 1.0;
  Vector3 theta = Vector3::UnitZ();
  double amplitude = 1.0;

  std::size_t panel_count() const;
  /// Throws InvalidArgument when bounding spheres of two bodies intersect.
  void validate() const;
};

/// Spheres of the given radius at the given centres, each meshed as a geodesic
/// sphere. The area-matched fit roughly halves the far-field error of the
/// inscribed mesh at equal panel count.
MultiBodyScene sphere_scene(const std::vector<Point3>& centers, double radius, int frequency, double kappa,
                            const Vector3& theta, SphereFit fit = SphereFit::area_matched);

struct DensitySolution {
  double kappa = 0.0;
  Vector3 theta = Vector3::UnitZ();
  std::vector<Panel> panels;           // all bodies, concatenated
  std::vector<std::size_t> offsets;    // first panel of each body, plus the total
  ComplexVector density;               // per panel
  ComplexVector charges;               // Q_j, integral of sigma over body j
  double residual_norm = 0.0;

  ComplexVector body_density(std::size_t body) const;
};

struct BemOptions {
  std::size_t panel_cap = 30000;
};

/// Collocation solution of  sum_j int Phi_kappa(x, y) sigma_j(y) ds(y) = -u^i(x)
/// on every surface; self panels use the analytic static part, near panels a
/// seven-point rule and distant panels the centroid.
DensitySolution solve_multibody(const MultiBodyScene& scene, const BemOptions& options = {});

/// values[i] = sum over panels of (1/4 pi) e^{-i kappa xhat_i . c_p} sigma_p |p|.
FarFieldPattern far_field_of_densities(const DensitySolution& solution, const DirectionSet& directions);

}  // namespace foldylab
