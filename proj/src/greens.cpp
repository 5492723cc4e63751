#include "foldylab/greens.hpp"

#include <cmath>

namespace foldylab::greens {

namespace {

// Below this value of kappa*r the smooth part is evaluated from its Taylor
// series; the cosine/sine form below is cancellation-free as well, the series
// just avoids the division by a tiny r.
constexpr double series_threshold = 1e-3;

}  // namespace

Complex phi_of_distance(double kappa, double r) {
  const double phase = kappa * r;
  return Complex(std::cos(phase), std::sin(phase)) / (four_pi * r);
}

Complex phi(WaveNumber kappa, const Point3& x, const Point3& y) {
  const double r = (x - y).norm();
  if (r == 0.0) throw CoincidentPointsError("phi: coincident points");
  return phi_of_distance(kappa.value(), r);
}

Complex p_smooth_of_distance(double kappa, double r) {
  const double x = kappa * r;
  if (x < series_threshold) {
    // (e^{ix} - 1)/r = i kappa sum_{n>=0} (i x)^n / (n+1)!
    Complex term = imag_unit * kappa;
    Complex sum = term;
    for (int n = 1; n <= 6; ++n) {
      term *= imag_unit * x / static_cast<double>(n + 1);
      sum += term;
    }
    return sum / four_pi;
  }
  const double half = std::sin(0.5 * x);
  return Complex(-2.0 * half * half, std::sin(x)) / (four_pi * r);
}

Complex p_smooth(WaveNumber kappa, const Point3& x, const Point3& y) {
  return p_smooth_of_distance(kappa.value(), (x - y).norm());
}

void require_unit(const Vector3& v, double tol) {
  if (!(std::abs(v.norm() - 1.0) <= tol)) {
    throw InvalidArgument("direction is not a unit vector");
  }
}

Complex far_kernel(WaveNumber kappa, const Vector3& xhat, const Point3& y) {
  require_unit(xhat);
  const double phase = -kappa.value() * xhat.dot(y);
  return Complex(std::cos(phase), std::sin(phase)) / four_pi;
}

}  // namespace foldylab::greens
