#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace foldylab {

using Complex = std::complex<double>;
using Point3 = Eigen::Vector3d;
using Vector3 = Eigen::Vector3d;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

inline constexpr double pi = std::numbers::pi;
inline constexpr double four_pi = 4.0 * std::numbers::pi;
inline constexpr double infinity = std::numeric_limits<double>::infinity();
inline constexpr Complex imag_unit{0.0, 1.0};

// Exception hierarchy. Everything thrown by the library derives from Error so
// callers (the CLI in particular) can catch one type.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class CoincidentPointsError : public Error {
 public:
  using Error::Error;
};

class SingularSystemError : public Error {
 public:
  using Error::Error;
};

class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, int iterations, double residual)
      : Error(what), iterations_(iterations), residual_(residual) {}
  int iterations() const { return iterations_; }
  double residual() const { return residual_; }

 private:
  int iterations_;
  double residual_;
};

class MeshError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

/// Helmholtz wave number kappa >= 0, optionally capped by kappa_max.
class WaveNumber {
 public:
  explicit WaveNumber(double kappa, double kappa_max = infinity) : value_(kappa) {
    if (!(kappa >= 0.0) || !std::isfinite(kappa)) {
      throw InvalidArgument("wave number must be finite and non-negative");
    }
    if (kappa > kappa_max) {
      throw InvalidArgument("wave number exceeds kappa_max");
    }
  }
  double value() const { return value_; }

 private:
  double value_;
};

/// Normalizes v; throws if it is (numerically) zero.
inline Vector3 unit(const Vector3& v) {
  const double n = v.norm();
  if (!(n > 0.0)) throw InvalidArgument("cannot normalize a zero vector");
  return v / n;
}

}  // namespace foldylab
