#include <cmath>

#include "doctest.h"
#include "foldylab/bem_oracle.hpp"
#include "foldylab/capacitance.hpp"
#include "foldylab/dirichlet_exterior.hpp"
#include "foldylab/foldy_lax.hpp"

using namespace foldylab;

namespace {

// Point-scatterer cloud whose capacitance comes from the very mesh the BEM uses.
ObstacleCloud matching_cloud(const std::vector<Point3>& centers, double radius, int frequency) {
  ObstacleCloud c;
  c.centers = centers;
  c.a = 2 * radius;
  c.s = 1.0;
  c.t = 1.0;
  c.capacitance_per_obstacle = capacitance_of(make_icosphere(frequency, radius, Point3::Zero(), SphereFit::area_matched), {false}).value;
  c.d_min = min_pair_distance(centers);
  return c;
}

}  // namespace

TEST_SUITE("bem_oracle") {
  TEST_CASE("single small sphere matches the point scatterer") {
    const double r = 0.05, kappa = 1.0;
    const auto scene = sphere_scene({Point3::Zero()}, r, 4, kappa, Vector3::UnitZ());
    const auto sol = solve_multibody(scene);
    const auto dirs = icosphere_directions(4);
    const auto bem = far_field_of_densities(sol, dirs);
    const auto fl = far_field(solve_direct(matching_cloud({Point3::Zero()}, r, 4), WaveNumber(kappa), Vector3::UnitZ()), dirs);
    CHECK(sup_deviation(bem, fl) < 0.05 * sup_abs(bem));
    CHECK(sol.residual_norm < 1e-10);
    CHECK(sol.offsets.size() == 2);
    CHECK(sol.body_density(0).size() == 320);
  }

  TEST_CASE("well separated pair") {
    // kappa r small enough that the O(kappa r) phase of a finite sphere stays below 1%
    const double r = 0.01, kappa = 0.5;
    const std::vector<Point3> centers = {Point3(-2 * r * 50, 0, 0), Point3(2 * r * 50, 0, 0)};
    const Vector3 theta = Vector3(1, 0, 1).normalized();
    const auto sol = solve_multibody(sphere_scene(centers, r, 4, kappa, theta));
    const auto dirs = icosphere_directions(4);
    const auto bem = far_field_of_densities(sol, dirs);
    const auto fl = far_field(solve_direct(matching_cloud(centers, r, 4), WaveNumber(kappa), theta), dirs);
    CHECK(sup_deviation(bem, fl) < 0.01 * sup_abs(bem));
    for (Eigen::Index b = 0; b < 2; ++b) CHECK(std::abs(sol.charges[b]) > 0.0);
  }

  TEST_CASE("charges of distant spheres match the isolated sphere") {
    const double r = 0.05;
    const std::vector<Point3> centers = {Point3::Zero(), Point3(200 * r, 0, 0)};
    const auto pair = solve_multibody(sphere_scene(centers, r, 4, 1.0, Vector3::UnitX()));
    for (std::size_t b = 0; b < 2; ++b) {
      const auto alone = solve_multibody(sphere_scene({centers[b]}, r, 4, 1.0, Vector3::UnitX()));
      CHECK(std::abs(pair.charges[b] - alone.charges[0]) < 0.01 * std::abs(alone.charges[0]));
    }
  }

  TEST_CASE("low-frequency sphere against the partial-wave series") {
    PartialWaveConfig pw;
    pw.radius = 0.1;
    pw.kappa = 0.5;
    const auto dirs = icosphere_directions(4);
    const auto bem = far_field_of_densities(solve_multibody(sphere_scene({Point3::Zero()}, 0.1, 4, 0.5, Vector3::UnitZ())), dirs);
    CHECK(sup_deviation(bem, mie_far_field(pw, Vector3::UnitZ(), dirs)) < 1e-3);
  }

  TEST_CASE("density is linear in the amplitude") {
    auto scene = sphere_scene({Point3::Zero(), Point3(0.5, 0.1, 0)}, 0.1, 2, 3.0, Vector3::UnitY());
    const auto one = solve_multibody(scene);
    scene.amplitude = 2.5;
    const auto two = solve_multibody(scene);
    CHECK((two.density - 2.5 * one.density).norm() < 1e-12 * two.density.norm());
  }

  TEST_CASE("sphere against the partial-wave series") {
    const double r = 0.1, kappa = 5.0;
    const auto sol = solve_multibody(sphere_scene({Point3::Zero()}, r, 5, kappa, Vector3::UnitZ()));
    REQUIRE(sol.panels.size() == 500);
    const auto dirs = icosphere_directions(4);
    PartialWaveConfig pw;
    pw.radius = r;
    pw.kappa = kappa;
    const auto bem = far_field_of_densities(sol, dirs);
    const auto mie = mie_far_field(pw, Vector3::UnitZ(), dirs);
    CHECK(sup_deviation(bem, mie) < 1e-3);
    const auto inscribed = far_field_of_densities(
        solve_multibody(sphere_scene({Point3::Zero()}, r, 5, kappa, Vector3::UnitZ(), SphereFit::inscribed)), dirs);
    CHECK(sup_deviation(bem, mie) < 0.5 * sup_deviation(inscribed, mie));
  }

  TEST_CASE("refinement approaches the series") {
    const double r = 0.5, kappa = 2.0;
    PartialWaveConfig pw;
    pw.radius = r;
    pw.kappa = kappa;
    const auto dirs = icosphere_directions(3);
    const auto mie = mie_far_field(pw, Vector3::UnitX(), dirs);
    double previous = infinity;
    for (int f : {2, 4, 6}) {
      const auto bem = far_field_of_densities(solve_multibody(sphere_scene({Point3::Zero()}, r, f, kappa, Vector3::UnitX())), dirs);
      const double dev = sup_deviation(bem, mie);
      CHECK(dev < previous);
      previous = dev;
    }
  }

  TEST_CASE("reciprocity of a two-body scene") {
    const std::vector<Point3> centers = {Point3(0, 0, 0), Point3(0.4, 0.2, -0.1)};
    const Vector3 theta = Vector3(1, 2, -1).normalized();
    const Vector3 xhat = Vector3(-0.3, 0.5, 1).normalized();
    const auto f = far_field_of_densities(solve_multibody(sphere_scene(centers, 0.1, 4, 4.0, theta)), DirectionSet{{xhat}, {}});
    const auto b = far_field_of_densities(solve_multibody(sphere_scene(centers, 0.1, 4, 4.0, -xhat)), DirectionSet{{-theta}, {}});
    // collocation breaks exact symmetry; the defect is a discretization error
    CHECK(std::abs(f.values[0] - b.values[0]) < 0.02 * std::abs(f.values[0]));
  }

  TEST_CASE("zero density gives a zero pattern") {
    auto sol = solve_multibody(sphere_scene({Point3::Zero()}, 0.1, 2, 1.0, Vector3::UnitZ()));
    sol.density.setZero();
    CHECK(sup_abs(far_field_of_densities(sol, icosphere_directions(2))) == 0.0);
  }

  TEST_CASE("scene validation") {
    CHECK_THROWS_AS(solve_multibody(sphere_scene({Point3::Zero(), Point3(0.15, 0, 0)}, 0.1, 2, 1.0, Vector3::UnitZ())),
                    InvalidArgument);
    MultiBodyScene empty;
    CHECK_THROWS_AS(solve_multibody(empty), InvalidArgument);
    BemOptions opt;
    opt.panel_cap = 10;
    CHECK_THROWS_AS(solve_multibody(sphere_scene({Point3::Zero()}, 0.1, 2, 1.0, Vector3::UnitZ()), opt), InvalidArgument);
  }
}
