#pragma once

#include <string>

#include <Eigen/Core>

#include "foldylab/directions.hpp"
#include "foldylab/far_field.hpp"
#include "foldylab/geometry.hpp"
#include "foldylab/types.hpp"

namespace foldylab {

/// Hypotheses of the solvability lemma for the point-interaction system.
/// gamma is the minimum over pairs of cos(kappa |z_j - z_m|).
struct InvertibilityReport {
  double a_over_d = 0.0;
  double threshold = 0.5;
  bool ratio_ok = true;
  double gamma = 1.0;
  bool gamma_ok = true;
  double c_hat_norm = 0.0;          // Euclidean norm of (cbar_1, ..., cbar_M)
  double contraction_factor = 0.0;  // 3 gamma a ||C_hat|| / (5 pi d)
  bool contraction_ok = true;
  bool passed = true;
};

InvertibilityReport check_invertibility(const ObstacleCloud& cloud, WaveNumber kappa, double threshold = 0.5);

enum class SolveMethod { direct, iterative };

struct FoldyLaxOptions {
  std::size_t direct_cap = 8000;
  std::size_t iterative_cap = 20000;
  double tolerance = 1e-10;
  int max_iterations = 1000;
  int restart = 200;
  double invertibility_threshold = 0.5;
  // When false the interaction sum is dropped and Q_m = -C_m u^i(z_m).
  bool coupling = true;
};

struct FoldyLaxSystem {
  ObstacleCloud cloud;
  double kappa = 0.0;
  Vector3 theta = Vector3::UnitZ();
  ComplexVector charges;     // Q_m
  ComplexVector normalized;  // Y_m = -Q_m / C_m
  double residual_norm = 0.0;
  InvertibilityReport invertibility;
  SolveMethod method = SolveMethod::direct;
  int iterations = 0;
};

/// Plane wave e^{i kappa z . theta} at the obstacle centres.
ComplexVector incident_at(const std::vector<Point3>& points, double kappa, const Vector3& theta);

/// Dense system matrix I + C B with B_mj = Phi_kappa(z_m, z_j) for j != m.
Eigen::MatrixXcd foldy_lax_matrix(const ObstacleCloud& cloud, WaveNumber kappa, bool coupling = true);

/// Matrix-free product (I + C B) q with pairwise row sums.
ComplexVector apply_foldy_lax(const ObstacleCloud& cloud, double kappa, const ComplexVector& q, bool coupling = true);

FoldyLaxSystem solve_direct(const ObstacleCloud& cloud, WaveNumber kappa, const Vector3& theta,
                            const FoldyLaxOptions& options = {});
FoldyLaxSystem solve_iterative(const ObstacleCloud& cloud, WaveNumber kappa, const Vector3& theta,
                               const FoldyLaxOptions& options = {});
/// Direct up to options.direct_cap, iterative beyond.
FoldyLaxSystem solve_foldy_lax(const ObstacleCloud& cloud, WaveNumber kappa, const Vector3& theta,
                               const FoldyLaxOptions& options = {});

/// ||(I + CB)Q + C u^i|| / ||C u^i|| re-evaluated with the matrix-free product.
double foldy_lax_residual(const FoldyLaxSystem& system);

struct LemmaBoundReport {
  bool hypotheses_met = false;
  std::string message;
  double factor = 0.0;             // 3 gamma a ||C_hat|| / (5 pi d)
  double sum_sq_y = 0.0;           // sum |Y_m|^2
  double sum_sq_bound = 0.0;       // 4 (1 - factor)^{-2} sum |U^i(z_m)|^2
  double sum_abs_y = 0.0;          // sum |Y_m|
  double sum_abs_bound = 0.0;      // 2 (1 - factor)^{-1} M max |U^i(z_m)|
  bool passed = false;
};

LemmaBoundReport verify_lemma_bound(const FoldyLaxSystem& system);

/// U^inf(xhat) = (1/4 pi) sum_m e^{-i kappa xhat . z_m} Q_m, tagged with M, a, s, t and seed.
FarFieldPattern far_field(const FoldyLaxSystem& system, const DirectionSet& directions);

}  // namespace foldylab
