#pragma once

#include "foldylab/mesh.hpp"
#include "foldylab/types.hpp"

namespace foldylab {

/// Total equilibrium charge of a reference shape (units of length).
struct Capacitance {
  double value = 0.0;
  std::size_t panel_count = 0;
  // |C(mesh) - C(refined mesh)|; NaN when the refinement estimate was skipped.
  double estimated_error = std::numeric_limits<double>::quiet_NaN();
};

struct CapacitanceOptions {
  bool estimate_error = true;
};

/// Piecewise-constant collocation solution of the first-kind equation
///   integral sigma(s) / (4 pi |t - s|) ds = 1   on the surface.
RealVector solve_density(const SurfaceMesh& mesh);

Capacitance capacitance_of(const SurfaceMesh& mesh, const CapacitanceOptions& options = {});

/// C = cbar * a for an obstacle of scale a built from a reference shape of capacitance cbar.
double scale_capacitance(double cbar, double a);

/// Capacitance of the diameter-1 reference sphere on a geodesic mesh of the given frequency.
double reference_sphere_capacitance(int frequency = 5);

}  // namespace foldylab
