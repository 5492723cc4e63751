#include "foldylab/foldy_lax.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include <Eigen/LU>

#include "foldylab/greens.hpp"
#include "foldylab/krylov.hpp"
#include "foldylab/summation.hpp"

namespace foldylab {

InvertibilityReport check_invertibility(const ObstacleCloud& cloud, WaveNumber kappa, double threshold) {
  InvertibilityReport r;
  r.threshold = threshold;
  const std::size_t m = cloud.size();
  const double d = min_pair_distance(cloud.centers);
  r.a_over_d = std::isinf(d) ? 0.0 : cloud.a / d;
  r.ratio_ok = r.a_over_d <= threshold;
  double gamma = 1.0;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      gamma = std::min(gamma, std::cos(kappa.value() * (cloud.centers[i] - cloud.centers[j]).norm()));
    }
  }
  r.gamma = gamma;
  r.gamma_ok = gamma >= 0.0;
  r.c_hat_norm = cloud.cbar() * std::sqrt(static_cast<double>(m));
  r.contraction_factor = std::isinf(d) ? 0.0 : 3.0 * gamma * cloud.a * r.c_hat_norm / (5.0 * pi * d);
  r.contraction_ok = r.contraction_factor < 1.0;
  r.passed = r.ratio_ok && r.gamma_ok && r.contraction_ok;
  return r;
}

ComplexVector incident_at(const std::vector<Point3>& points, double kappa, const Vector3& theta) {
  ComplexVector u(static_cast<Eigen::Index>(points.size()));
  for (std::size_t m = 0; m < points.size(); ++m) {
    const double phase = kappa * points[m].dot(theta);
    u[m] = Complex(std::cos(phase), std::sin(phase));
  }
  return u;
}

Eigen::MatrixXcd foldy_lax_matrix(const ObstacleCloud& cloud, WaveNumber kappa, bool coupling) {
  const auto m = static_cast<Eigen::Index>(cloud.size());
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Identity(m, m);
  if (!coupling) return a;
  const double c = cloud.capacitance_per_obstacle;
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = i + 1; j < m; ++j) {
      const double r = (cloud.centers[i] - cloud.centers[j]).norm();
      if (r == 0.0) throw CoincidentPointsError("Foldy-Lax: coincident obstacle centres");
      const Complex v = c * greens::phi_of_distance(kappa.value(), r);
      a(i, j) = v;
      a(j, i) = v;
    }
  }
  return a;
}

ComplexVector apply_foldy_lax(const ObstacleCloud& cloud, double kappa, const ComplexVector& q, bool coupling) {
  const std::size_t m = cloud.size();
  ComplexVector out = q;
  if (!coupling) return out;
  const double c = cloud.capacitance_per_obstacle;
  std::vector<Complex> terms(m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      terms[j] = i == j ? Complex(0.0) : greens::phi_of_distance(kappa, (cloud.centers[i] - cloud.centers[j]).norm()) * q[j];
    }
    out[i] += c * pairwise_sum(std::span<const Complex>(terms));
  }
  return out;
}

namespace {

FoldyLaxSystem prepare(const ObstacleCloud& cloud, WaveNumber kappa, const Vector3& theta,
                       const FoldyLaxOptions& options, SolveMethod method) {
  if (cloud.size() == 0) throw InvalidArgument("Foldy-Lax: empty cloud");
  if (!(cloud.capacitance_per_obstacle > 0.0)) throw InvalidArgument("Foldy-Lax: capacitance must be positive");
  greens::require_unit(theta, 1e-10);
  FoldyLaxSystem s;
  s.cloud = cloud;
  s.kappa = kappa.value();
  s.theta = theta;
  s.method = method;
  s.invertibility = check_invertibility(cloud, kappa, options.invertibility_threshold);
  return s;
}

void finish(FoldyLaxSystem& s, bool coupling) {
  s.normalized = -s.charges / s.cloud.capacitance_per_obstacle;
  const ComplexVector rhs = -s.cloud.capacitance_per_obstacle * incident_at(s.cloud.centers, s.kappa, s.theta);
  s.residual_norm = (apply_foldy_lax(s.cloud, s.kappa, s.charges, coupling) - rhs).norm() / rhs.norm();
}

}  // namespace

FoldyLaxSystem solve_direct(const ObstacleCloud& cloud, WaveNumber kappa, const Vector3& theta,
                            const FoldyLaxOptions& options) {
  if (cloud.size() > options.direct_cap) {
    throw InvalidArgument("Foldy-Lax: M = " + std::to_string(cloud.size()) + " exceeds the direct-solve cap");
  }
  FoldyLaxSystem s = prepare(cloud, kappa, theta, options, SolveMethod::direct);
  const Eigen::MatrixXcd a = foldy_lax_matrix(cloud, kappa, options.coupling);
  const ComplexVector rhs = -cloud.capacitance_per_obstacle * incident_at(cloud.centers, kappa.value(), theta);
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(a);
  if (!(lu.rcond() > 1e-14)) throw SingularSystemError("Foldy-Lax: numerically singular system");
  s.charges = lu.solve(rhs);
  finish(s, options.coupling);
  return s;
}

FoldyLaxSystem solve_iterative(const ObstacleCloud& cloud, WaveNumber kappa, const Vector3& theta,
                               const FoldyLaxOptions& options) {
  if (!(options.tolerance > 0.0)) throw InvalidArgument("Foldy-Lax: tolerance must be positive");
  if (cloud.size() > options.iterative_cap) {
    throw InvalidArgument("Foldy-Lax: M = " + std::to_string(cloud.size()) + " exceeds the iterative cap");
  }
  FoldyLaxSystem s = prepare(cloud, kappa, theta, options, SolveMethod::iterative);
  const ComplexVector rhs = -cloud.capacitance_per_obstacle * incident_at(cloud.centers, kappa.value(), theta);
  KrylovOptions ko;
  ko.tolerance = options.tolerance;
  ko.max_iterations = options.max_iterations;
  ko.restart = options.restart;
  auto op = [&](const ComplexVector& v, ComplexVector& out) {
    out = apply_foldy_lax(cloud, kappa.value(), v, options.coupling);
  };
  KrylovResult kr = gmres(op, rhs, ko);
  if (!kr.converged) {
    throw ConvergenceError("Foldy-Lax: GMRES did not converge", kr.iterations, kr.relative_residual);
  }
  s.charges = std::move(kr.x);
  s.iterations = kr.iterations;
  finish(s, options.coupling);
  return s;
}

FoldyLaxSystem solve_foldy_lax(const ObstacleCloud& cloud, WaveNumber kappa, const Vector3& theta,
                               const FoldyLaxOptions& options) {
  return cloud.size() <= options.direct_cap ? solve_direct(cloud, kappa, theta, options)
                                            : solve_iterative(cloud, kappa, theta, options);
}

double foldy_lax_residual(const FoldyLaxSystem& s) {
  const ComplexVector rhs = -s.cloud.capacitance_per_obstacle * incident_at(s.cloud.centers, s.kappa, s.theta);
  return (apply_foldy_lax(s.cloud, s.kappa, s.charges) - rhs).norm() / rhs.norm();
}

LemmaBoundReport verify_lemma_bound(const FoldyLaxSystem& s) {
  LemmaBoundReport r;
  const InvertibilityReport inv = check_invertibility(s.cloud, WaveNumber(s.kappa));
  const double d = min_pair_distance(s.cloud.centers);
  const bool size_ok = std::isinf(d) || s.cloud.a < 5.0 * pi / 3.0 * d / inv.c_hat_norm;
  if (!size_ok || !inv.gamma_ok) {
    r.message = !size_ok ? "a >= (5 pi / 3) d / ||C_hat||" : "min cos(kappa |z_j - z_m|) < 0";
    return r;
  }
  r.hypotheses_met = true;
  r.factor = inv.contraction_factor;
  const ComplexVector ui = incident_at(s.cloud.centers, s.kappa, s.theta);
  const auto m = static_cast<double>(s.cloud.size());
  r.sum_sq_y = s.normalized.squaredNorm();
  r.sum_abs_y = s.normalized.cwiseAbs().sum();
  r.sum_sq_bound = 4.0 / ((1.0 - r.factor) * (1.0 - r.factor)) * ui.squaredNorm();
  r.sum_abs_bound = 2.0 / (1.0 - r.factor) * m * ui.cwiseAbs().maxCoeff();
  r.passed = r.sum_sq_y <= r.sum_sq_bound && r.sum_abs_y <= r.sum_abs_bound;
  r.message = r.passed ? "bounds hold" : "bound violated";
  return r;
}

FarFieldPattern far_field(const FoldyLaxSystem& s, const DirectionSet& directions) {
  FarFieldPattern p = synthesize_far_field(s.kappa, s.theta, directions, s.cloud.centers, s.charges, Provenance::foldy);
  p.metadata["M"] = std::to_string(s.cloud.size());
  p.metadata["a"] = format_double(s.cloud.a);
  p.metadata["s"] = format_double(s.cloud.s);
  p.metadata["t"] = format_double(s.cloud.t);
  p.metadata["seed"] = std::to_string(s.cloud.seed);
  return p;
}

}  // namespace foldylab
