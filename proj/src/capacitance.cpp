#include "foldylab/capacitance.hpp"

#include <cmath>
#include <map>
#include <mutex>

#include <Eigen/LU>

#include "foldylab/panel_integrals.hpp"

namespace foldylab {

RealVector solve_density(const SurfaceMesh& mesh) {
  const Eigen::MatrixXd a = assemble_laplace_single_layer(mesh.panels());
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(a);
  if (!(lu.rcond() > 1e-13)) throw SingularSystemError("capacitance: singular collocation matrix");
  const RealVector ones = RealVector::Ones(a.rows());
  return lu.solve(ones);
}

namespace {

double total_charge(const SurfaceMesh& mesh, const RealVector& density) {
  double q = 0.0;
  for (std::size_t i = 0; i < mesh.size(); ++i) q += density[static_cast<Eigen::Index>(i)] * mesh.panels()[i].area;
  return q;
}

}  // namespace

Capacitance capacitance_of(const SurfaceMesh& mesh, const CapacitanceOptions& options) {
  Capacitance c;
  c.value = total_charge(mesh, solve_density(mesh));
  c.panel_count = mesh.size();
  if (options.estimate_error) {
    const SurfaceMesh fine = mesh.refined();
    c.estimated_error = std::abs(total_charge(fine, solve_density(fine)) - c.value);
  }
  if (!(c.value > 0.0)) throw SingularSystemError("capacitance: non-positive total charge");
  return c;
}

double scale_capacitance(double cbar, double a) {
  if (!(cbar > 0.0) || !(a > 0.0)) throw InvalidArgument("scale_capacitance: cbar and a must be positive");
  return cbar * a;
}

double reference_sphere_capacitance(int frequency) {
  static std::mutex mutex;
  static std::map<int, double> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(frequency);
  if (it != cache.end()) return it->second;
  const double value = capacitance_of(make_icosphere(frequency, 0.5), {.estimate_error = false}).value;
  cache.emplace(frequency, value);
  return value;
}

}  // namespace foldylab
