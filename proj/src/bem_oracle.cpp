#include "foldylab/bem_oracle.hpp"

#include <cmath>

#include <Eigen/LU>

#include "foldylab/foldy_lax.hpp"
#include "foldylab/panel_integrals.hpp"

namespace foldylab {

std::size_t MultiBodyScene::panel_count() const {
  std::size_t n = 0;
  for (const auto& b : bodies) n += b.size();
  return n;
}

void MultiBodyScene::validate() const {
  if (bodies.empty()) throw InvalidArgument("scene: no bodies");
  if (!(kappa >= 0.0) || !std::isfinite(kappa)) throw InvalidArgument("scene: invalid wave number");
  for (std::size_t i = 0; i < bodies.size(); ++i) {
    for (std::size_t j = i + 1; j < bodies.size(); ++j) {
      const double gap = (bodies[i].bounding_center() - bodies[j].bounding_center()).norm();
      if (gap <= bodies[i].bounding_radius() + bodies[j].bounding_radius()) {
        throw InvalidArgument("scene: bodies " + std::to_string(i) + " and " + std::to_string(j) + " overlap");
      }
    }
  }
}

MultiBodyScene sphere_scene(const std::vector<Point3>& centers, double radius, int frequency, double kappa,
                            const Vector3& theta, SphereFit fit) {
  MultiBodyScene scene;
  scene.kappa = kappa;
  scene.theta = theta;
  const SurfaceMesh reference = make_icosphere(frequency, radius, Point3::Zero(), fit);
  for (const auto& c : centers) scene.bodies.push_back(reference.translated(c));
  return scene;
}

ComplexVector DensitySolution::body_density(std::size_t body) const {
  return density.segment(offsets[body], offsets[body + 1] - offsets[body]);
}

DensitySolution solve_multibody(const MultiBodyScene& scene, const BemOptions& options) {
  scene.validate();
  if (scene.panel_count() > options.panel_cap) throw InvalidArgument("scene: panel count exceeds the dense-solve cap");
  DensitySolution sol;
  sol.kappa = scene.kappa;
  sol.theta = scene.theta;
  for (const auto& b : scene.bodies) {
    sol.offsets.push_back(sol.panels.size());
    sol.panels.insert(sol.panels.end(), b.panels().begin(), b.panels().end());
  }
  sol.offsets.push_back(sol.panels.size());

  const Eigen::MatrixXcd a = assemble_single_layer(scene.kappa, sol.panels);
  std::vector<Point3> centroids;
  centroids.reserve(sol.panels.size());
  for (const auto& p : sol.panels) centroids.push_back(p.centroid);
  const ComplexVector rhs = -scene.amplitude * incident_at(centroids, scene.kappa, scene.theta);

  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(a);
  if (!(lu.rcond() > 1e-13)) throw SingularSystemError("BEM: singular single-layer system");
  sol.density = lu.solve(rhs);
  sol.residual_norm = (a * sol.density - rhs).norm() / std::max(rhs.norm(), 1e-300);

  sol.charges.resize(static_cast<Eigen::Index>(scene.bodies.size()));
  for (std::size_t b = 0; b < scene.bodies.size(); ++b) {
    Complex q = 0.0;
    for (std::size_t p = sol.offsets[b]; p < sol.offsets[b + 1]; ++p) q += sol.density[p] * sol.panels[p].area;
    sol.charges[b] = q;
  }
  return sol;
}

FarFieldPattern far_field_of_densities(const DensitySolution& solution, const DirectionSet& directions) {
  std::vector<Point3> sources;
  ComplexVector strengths(static_cast<Eigen::Index>(solution.panels.size()));
  sources.reserve(solution.panels.size());
  for (std::size_t p = 0; p < solution.panels.size(); ++p) {
    sources.push_back(solution.panels[p].centroid);
    strengths[p] = solution.density.size() ? solution.density[p] * solution.panels[p].area : Complex(0.0);
  }
  FarFieldPattern pattern =
      synthesize_far_field(solution.kappa, solution.theta, directions, sources, strengths, Provenance::bem);
  pattern.metadata["bodies"] = std::to_string(solution.offsets.empty() ? 0 : solution.offsets.size() - 1);
  pattern.metadata["panels"] = std::to_string(solution.panels.size());
  return pattern;
}

}  // namespace foldylab
