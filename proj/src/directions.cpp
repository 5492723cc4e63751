#include "foldylab/directions.hpp"

#include <cmath>

#include "foldylab/mesh.hpp"

namespace foldylab {

DirectionSet icosphere_directions(int frequency) {
  const SurfaceMesh sphere = make_icosphere(frequency);
  DirectionSet set;
  set.directions.reserve(sphere.vertices().size());
  for (const auto& v : sphere.vertices()) set.directions.push_back(v.normalized());
  return set;
}

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  if (n < 1) throw InvalidArgument("Gauss-Legendre order must be >= 1");
  nodes.assign(n, 0.0);
  weights.assign(n, 0.0);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      if (n == 1) p0 = 1.0;
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // recompute derivative at the converged node
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = pk;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    nodes[i] = -x;
    nodes[n - 1 - i] = x;
    weights[i] = weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
}

DirectionSet gauss_product_quadrature(int n_polar, int n_azimuth) {
  if (n_azimuth < 1) throw InvalidArgument("azimuthal count must be >= 1");
  std::vector<double> mu, w;
  gauss_legendre(n_polar, mu, w);
  DirectionSet set;
  set.directions.reserve(n_polar * n_azimuth);
  set.weights.reserve(n_polar * n_azimuth);
  const double dphi = 2.0 * pi / n_azimuth;
  for (int i = 0; i < n_polar; ++i) {
    const double sin_t = std::sqrt(std::max(0.0, 1.0 - mu[i] * mu[i]));
    for (int j = 0; j < n_azimuth; ++j) {
      const double phi = (j + 0.5) * dphi;
      set.directions.push_back(Vector3(sin_t * std::cos(phi), sin_t * std::sin(phi), mu[i]).normalized());
      set.weights.push_back(w[i] * dphi);
    }
  }
  return set;
}

DirectionSet fibonacci_directions(int n) {
  if (n < 1) throw InvalidArgument("Fibonacci direction count must be >= 1");
  DirectionSet set;
  const double golden = pi * (3.0 - std::sqrt(5.0));
  for (int i = 0; i < n; ++i) {
    const double z = 1.0 - 2.0 * (i + 0.5) / n;
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double phi = golden * i;
    set.directions.push_back(Vector3(r * std::cos(phi), r * std::sin(phi), z).normalized());
    set.weights.push_back(four_pi / n);
  }
  return set;
}

DirectionSet with_direction(DirectionSet set, const Vector3& direction) {
  set.directions.push_back(unit(direction));
  if (!set.weights.empty()) set.weights.push_back(0.0);
  return set;
}

}  // namespace foldylab
