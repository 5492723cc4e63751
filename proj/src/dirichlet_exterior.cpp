#include "foldylab/dirichlet_exterior.hpp"

#include <algorithm>
#include <cmath>

#include "foldylab/greens.hpp"

namespace foldylab {

std::vector<double> spherical_bessel_j(int nmax, double x) {
  if (nmax < 0) throw InvalidArgument("Bessel order must be non-negative");
  std::vector<double> j(nmax + 1, 0.0);
  if (x == 0.0) {
    j[0] = 1.0;
    return j;
  }
  const int start = nmax + 20 + static_cast<int>(std::abs(x));
  double next = 0.0, cur = 1e-300;
  std::vector<double> tmp(start + 2, 0.0);
  tmp[start + 1] = next;
  tmp[start] = cur;
  for (int n = start; n >= 1; --n) {
    const double prev = (2.0 * n + 1.0) / x * cur - next;
    next = cur;
    cur = prev;
    tmp[n - 1] = cur;
    if (std::abs(cur) > 1e250) {
      for (int k = n - 1; k <= start + 1; ++k) tmp[k] *= 1e-250;
      cur = tmp[n - 1];
      next = tmp[n];
    }
  }
  const double j0 = std::sin(x) / x;
  const double j1 = std::sin(x) / (x * x) - std::cos(x) / x;
  const double scale = std::abs(j0) >= std::abs(j1) ? j0 / tmp[0] : j1 / tmp[1];
  for (int n = 0; n <= nmax; ++n) j[n] = tmp[n] * scale;
  return j;
}

std::vector<double> spherical_bessel_y(int nmax, double x) {
  if (nmax < 0) throw InvalidArgument("Bessel order must be non-negative");
  if (!(x > 0.0)) throw InvalidArgument("spherical y_n needs x > 0");
  std::vector<double> y(nmax + 1);
  y[0] = -std::cos(x) / x;
  if (nmax >= 1) y[1] = -std::cos(x) / (x * x) - std::sin(x) / x;
  for (int n = 1; n < nmax; ++n) y[n + 1] = (2.0 * n + 1.0) / x * y[n] - y[n - 1];
  return y;
}

std::vector<double> legendre_p(int nmax, double x) {
  std::vector<double> p(nmax + 1);
  p[0] = 1.0;
  if (nmax >= 1) p[1] = x;
  for (int n = 1; n < nmax; ++n) p[n + 1] = ((2.0 * n + 1.0) * x * p[n] - n * p[n - 1]) / (n + 1.0);
  return p;
}

namespace {

constexpr double tail_tolerance = 1e-10;

double tail_ratio(int l, double x) {
  const auto j = spherical_bessel_j(l, x);
  const auto y = spherical_bessel_y(l, x);
  double lead = 0.0;
  for (int n = 0; n <= l; ++n) lead = std::max(lead, std::abs(j[n] / Complex(j[n], y[n])));
  const double cl = std::abs(j[l] / Complex(j[l], y[l]));
  return (2.0 * l + 1.0) * cl / lead;
}

}  // namespace

int PartialWaveConfig::effective_order() const {
  if (order > 0) return order;
  int l = static_cast<int>(std::ceil(kappa * radius)) + 10;
  if (!(kappa > 0.0) || !(radius > 0.0) || !std::isfinite(kappa * radius)) return l;
  // grow past the minimum until the tail estimate is small
  while (l < 10000 && tail_ratio(l, kappa * radius) > tail_tolerance) l += 2;
  return l;
}

void PartialWaveConfig::validate() const {
  if (!(radius > 0.0)) throw InvalidArgument("partial waves: radius must be positive");
  if (!(kappa > 0.0) || !std::isfinite(kappa)) throw InvalidArgument("partial waves: kappa must be positive");
  if (effective_order() < kappa * radius + 10.0) throw InvalidArgument("partial waves: order below kappa R + 10");
}

std::vector<Complex> mie_coefficients(const PartialWaveConfig& config) {
  config.validate();
  const int l = config.effective_order();
  const double x = config.kappa * config.radius;
  const auto j = spherical_bessel_j(l, x);
  const auto y = spherical_bessel_y(l, x);
  std::vector<Complex> c(l + 1);
  for (int n = 0; n <= l; ++n) c[n] = -j[n] / Complex(j[n], y[n]);
  return c;
}

FarFieldPattern mie_far_field(const PartialWaveConfig& config, const Vector3& theta, const DirectionSet& directions) {
  greens::require_unit(theta, 1e-10);
  const auto c = mie_coefficients(config);
  const int l = static_cast<int>(c.size()) - 1;
  double leading = 0.0;
  for (const auto& cn : c) leading = std::max(leading, std::abs(cn));
  const double tail = (2.0 * l + 1.0) * std::abs(c[l]);
  if (tail > tail_tolerance * leading) throw InvalidArgument("partial waves: truncation tail too large, raise the order");

  FarFieldPattern p;
  p.kappa = config.kappa;
  p.incident_direction = theta;
  p.directions = directions.directions;
  p.weights = directions.weights;
  p.provenance = Provenance::dirichlet;
  p.values.resize(directions.size());
  for (std::size_t i = 0; i < directions.size(); ++i) {
    greens::require_unit(directions.directions[i], 1e-10);
    const double mu = std::clamp(directions.directions[i].dot(theta), -1.0, 1.0);
    const auto leg = legendre_p(l, mu);
    Complex sum = 0.0;
    for (int n = l; n >= 0; --n) sum += (2.0 * n + 1.0) * c[n] * leg[n];
    p.values[i] = -imag_unit / config.kappa * sum;
  }
  p.metadata["radius"] = format_double(config.radius);
  p.metadata["order"] = std::to_string(l);
  p.metadata["tail_bound"] = format_double(tail / config.kappa);
  return p;
}

ComplexVector mie_total_field(const PartialWaveConfig& config, const Vector3& theta, const std::vector<Point3>& points) {
  const auto c = mie_coefficients(config);
  const int l = static_cast<int>(c.size()) - 1;
  ComplexVector u(static_cast<Eigen::Index>(points.size()));
  for (std::size_t k = 0; k < points.size(); ++k) {
    const double r = points[k].norm();
    if (r < config.radius * (1.0 - 1e-12)) throw InvalidArgument("partial waves: point inside the ball");
    const double mu = std::clamp(points[k].dot(theta) / r, -1.0, 1.0);
    const auto leg = legendre_p(l, mu);
    const auto j = spherical_bessel_j(l, config.kappa * r);
    const auto y = spherical_bessel_y(l, config.kappa * r);
    Complex sum = 0.0;
    Complex in = 1.0;
    for (int n = 0; n <= l; ++n) {
      sum += in * (2.0 * n + 1.0) * c[n] * Complex(j[n], y[n]) * leg[n];
      in *= imag_unit;
    }
    const double phase = config.kappa * points[k].dot(theta);
    u[k] = Complex(std::cos(phase), std::sin(phase)) + sum;
  }
  return u;
}

double optical_theorem_check(const FarFieldPattern& pattern, double kappa) {
  if (pattern.weights.size() != pattern.directions.size()) {
    throw InvalidArgument("optical theorem: pattern has no quadrature weights");
  }
  std::size_t forward = pattern.size();
  for (std::size_t i = 0; i < pattern.size(); ++i) {
    if ((pattern.directions[i] - pattern.incident_direction).norm() < 1e-12) forward = i;
  }
  if (forward == pattern.size()) throw InvalidArgument("optical theorem: incident direction not sampled");
  double integral = 0.0;
  for (std::size_t i = 0; i < pattern.size(); ++i) integral += pattern.weights[i] * std::norm(pattern.values[i]);
  const double rhs = kappa / four_pi * integral;
  const double lhs = pattern.values[forward].imag();
  if (rhs == 0.0) return lhs == 0.0 ? 0.0 : infinity;
  return std::abs(lhs - rhs) / rhs;
}

}  // namespace foldylab
