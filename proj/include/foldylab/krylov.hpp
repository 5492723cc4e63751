#pragma once

#include <cmath>
#include <vector>

#include <Eigen/Core>

#include "foldylab/types.hpp"

namespace foldylab {

struct KrylovOptions {
  double tolerance = 1e-10;  // relative residual ||b - Ax|| / ||b||
  int max_iterations = 500;
  int restart = 200;
};

struct KrylovResult {
  ComplexVector x;
  int iterations = 0;
  double relative_residual = 0.0;
  bool converged = false;
};

/// Restarted GMRES with modified Gram-Schmidt and Givens rotations.
/// `apply(v, out)` must write A v into out (out is pre-sized).
template <typename Apply>
KrylovResult gmres(Apply&& apply, const ComplexVector& b, const KrylovOptions& options,
                   const ComplexVector* initial_guess = nullptr) {
  const Eigen::Index n = b.size();
  KrylovResult result;
  result.x = initial_guess ? *initial_guess : ComplexVector::Zero(n);
  const double b_norm = b.norm();
  if (b_norm == 0.0) {
    result.x.setZero();
    result.converged = true;
    return result;
  }
  const int m = std::max(1, std::min<int>(options.restart, static_cast<int>(n)));
  ComplexVector work(n);

  auto true_residual = [&](ComplexVector& r) {
    apply(result.x, work);
    r = b - work;
    return r.norm();
  };

  ComplexVector r(n);
  double beta = true_residual(r);
  result.relative_residual = beta / b_norm;
  if (result.relative_residual <= options.tolerance) {
    result.converged = true;
    return result;
  }

  std::vector<ComplexVector> basis;
  Eigen::MatrixXcd h(m + 1, m);
  std::vector<Complex> cs(m), sn(m);
  ComplexVector g(m + 1);

  while (result.iterations < options.max_iterations) {
    basis.assign(1, r / beta);
    h.setZero();
    g.setZero();
    g(0) = beta;
    int k = 0;
    for (; k < m && result.iterations < options.max_iterations; ++k) {
      ComplexVector w(n);
      apply(basis[k], w);
      for (int j = 0; j <= k; ++j) {
        h(j, k) = basis[j].dot(w);
        w -= h(j, k) * basis[j];
      }
      const double w_norm = w.norm();
      h(k + 1, k) = w_norm;
      for (int j = 0; j < k; ++j) {
        const Complex t = std::conj(cs[j]) * h(j, k) + std::conj(sn[j]) * h(j + 1, k);
        h(j + 1, k) = -sn[j] * h(j, k) + cs[j] * h(j + 1, k);
        h(j, k) = t;
      }
      const double denom = std::hypot(std::abs(h(k, k)), w_norm);
      if (denom == 0.0) {
        cs[k] = 1.0;
        sn[k] = 0.0;
      } else {
        cs[k] = h(k, k) / denom;
        sn[k] = Complex(w_norm / denom, 0.0);
      }
      h(k, k) = denom;
      h(k + 1, k) = 0.0;
      g(k + 1) = -sn[k] * g(k);
      g(k) = std::conj(cs[k]) * g(k);
      ++result.iterations;
      const double estimate = std::abs(g(k + 1)) / b_norm;
      if (w_norm > 0.0) basis.push_back(w / w_norm);
      if (estimate <= options.tolerance || w_norm == 0.0) {
        ++k;
        break;
      }
    }
    ComplexVector y = h.topLeftCorner(k, k).triangularView<Eigen::Upper>().solve(g.head(k));
    for (int j = 0; j < k; ++j) result.x += y(j) * basis[j];
    beta = true_residual(r);
    result.relative_residual = beta / b_norm;
    if (result.relative_residual <= options.tolerance) {
      result.converged = true;
      return result;
    }
  }
  return result;
}

}  // namespace foldylab
