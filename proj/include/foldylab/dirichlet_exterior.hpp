#pragma once

#include <vector>

#include "foldylab/directions.hpp"
#include "foldylab/far_field.hpp"
#include "foldylab/types.hpp"

namespace foldylab {

/// Spherical Bessel functions j_0..j_nmax (downward recurrence normalized by
/// j_0 or j_1) and y_0..y_nmax (upward recurrence).
std::vector<double> spherical_bessel_j(int nmax, double x);
std::vector<double> spherical_bessel_y(int nmax, double x);

/// Legendre polynomials P_0..P_nmax at x.
std::vector<double> legendre_p(int nmax, double x);

/// Sound-soft ball of radius R centred at the origin, truncated at order L.
struct PartialWaveConfig {
  double radius = 1.0;
  double kappa = 1.0;
  int order = 0;  // 0: ceil(kappa R) + 10, raised until the tail estimate is below 1e-10

  int effective_order() const;
  /// Throws InvalidArgument unless R > 0, kappa > 0 and L >= kappa R + 10.
  void validate() const;
};

/// Coefficients c_n = -j_n(kappa R) / h_n(kappa R), n = 0..L.
std::vector<Complex> mie_coefficients(const PartialWaveConfig& config);

/// U^inf(xhat) = (-i / kappa) sum_n (2n+1) c_n P_n(xhat . theta). The
/// metadata records the truncation tail estimate; throws InvalidArgument when
/// that estimate exceeds 1e-10 of the largest coefficient.
FarFieldPattern mie_far_field(const PartialWaveConfig& config, const Vector3& theta, const DirectionSet& directions);

/// Total field e^{i kappa x.theta} + scattered series at the given points (|x| >= R).
ComplexVector mie_total_field(const PartialWaveConfig& config, const Vector3& theta, const std::vector<Point3>& points);

/// |Im U(theta, theta) - (kappa / 4 pi) int |U|^2| relative to the integral.
/// The pattern must carry quadrature weights and contain the incident
/// direction among its samples. Returns 0 when both terms vanish.
double optical_theorem_check(const FarFieldPattern& pattern, double kappa);

}  // namespace foldylab
