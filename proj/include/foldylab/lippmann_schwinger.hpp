#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "foldylab/directions.hpp"
#include "foldylab/far_field.hpp"
#include "foldylab/geometry.hpp"
#include "foldylab/types.hpp"
#include "foldylab/volume_grid.hpp"

namespace foldylab {

/// U + amplitude * int_Omega Phi_kappa(., y) V0 U(y) dy = e^{i kappa x.theta}, with constant V0 on Omega.
struct LsProblem {
  DomainSpec domain = DomainSpec::ball(1.0);
  double kappa = 1.0;
  Vector3 theta = Vector3::UnitZ();
  double amplitude = 1.0;    // a^{1-s}, or h^{-2} for semiclassical runs
  double coefficient = 0.0;  // V0
  double spacing = 0.05;
};

struct LsOptions {
  double tolerance = 1e-8;
  int max_iterations = 3000;
  int restart = 100;
  bool check_resolution = true;
  int exterior_layers = 2;
  // Rows re-evaluated by direct summation; all support rows when the support is at most this large.
  std::size_t verify_rows = 6000;
};

/// Semiclassical parameter h with amplitude = h^{-2}.
inline double semiclassical_h(double amplitude) { return 1.0 / std::sqrt(amplitude); }

struct VolumeField {
  VolumeGrid grid;
  double kappa = 0.0;
  Vector3 theta = Vector3::UnitZ();
  double amplitude = 0.0;
  double coefficient = 0.0;
  std::vector<Complex> values;    // every grid cell; outside the support from the representation formula
  std::vector<double> potential;  // V0 on cells with positive volume fraction, 0 elsewhere
  double residual_norm = 0.0;     // FFT operator, all support rows
  double verified_residual = 0.0; // direct summation on the verification rows
  std::size_t verified_rows = 0;
  int iterations = 0;
};

/// Self term of a cell of weight w: rho^2 / 2 + i kappa w / (4 pi) with rho the equal-volume radius.
Complex self_term(double kappa, double weight);

/// (A f)_i = sum_{j != i} Phi_kappa(x_i, x_j) V_j w_j f_j + self_i V_i f_i on the full grid.
std::vector<Complex> apply_volume_potential(const VolumeGrid& grid, double kappa, const std::vector<double>& potential,
                                            const std::vector<Complex>& f);

/// Throws InvalidArgument if the grid has fewer than 10 cells per wavelength
/// or, when amplitude > 1, if spacing > h / 4.
void check_ls_resolution(const LsProblem& problem);

VolumeField solve_ls(const LsProblem& problem, const LsOptions& options = {});

/// values[i] = -amplitude (1/4 pi) sum_cells e^{-i kappa xhat_i . y_j} V0 U(y_j) w_j.
FarFieldPattern ls_far_field(const VolumeField& field, const DirectionSet& directions);

struct NormReport {
  double L2_interior = 0.0;
  double H1_interior = 0.0;
  double L2_boundary_trace = 0.0;
  double sup_norm = 0.0;
};

/// Trilinear interpolation of the field at a point inside the grid hull.
Complex interpolate(const VolumeField& field, const Point3& p);

/// Boundary samples: Fibonacci points on a ball, per-face midpoint grids on a cube.
/// Weights sum to the surface area.
void boundary_samples(const DomainSpec& domain, int count, std::vector<Point3>& points, std::vector<double>& weights);

NormReport norm_report(const VolumeField& field, int trace_points = 4000);

struct SupNormReport {
  double sup_norm = 0.0;
  double predicted_order = 0.0;  // a^{(1-s)/2}
  double ratio = 0.0;
};

SupNormReport sup_norm_estimates(const VolumeField& field, double a, double s);

/// Columns cell,y1,y2,y3,re,im with a '#' header describing the run.
void write_volume_field_csv(std::ostream& out, const VolumeField& field);

}  // namespace foldylab
