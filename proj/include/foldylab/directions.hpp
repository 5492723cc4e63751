#pragma once

#include <vector>

#include "foldylab/types.hpp"

namespace foldylab {

/// A set of unit directions on S^2, optionally carrying quadrature weights
/// (empty when the set is not a quadrature rule).
struct DirectionSet {
  std::vector<Vector3> directions;
  std::vector<double> weights;

  std::size_t size() const { return directions.size(); }
};

/// Vertices of the geodesic icosphere with the given frequency (each
/// icosahedron edge split into `frequency` segments): 10 f^2 + 2 directions.
/// Frequency 4 gives the 162-direction grid used for sup-norm metrics.
DirectionSet icosphere_directions(int frequency);

/// Gauss-Legendre in cos(polar) times the trapezoidal rule in azimuth.
/// Weights sum to 4 pi; exact for spherical harmonics of degree < 2 n_polar.
DirectionSet gauss_product_quadrature(int n_polar, int n_azimuth);

/// Fibonacci lattice with equal weights 4 pi / n.
DirectionSet fibonacci_directions(int n);

/// Appends `direction` with weight zero (so a quadrature stays exact).
DirectionSet with_direction(DirectionSet set, const Vector3& direction);

/// Gauss-Legendre nodes and weights on [-1, 1].
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

}  // namespace foldylab
