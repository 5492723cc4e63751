#include "foldylab/newtonian_spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <random>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include "foldylab/far_field.hpp"
#include "foldylab/panel_integrals.hpp"

namespace foldylab {

RealVector NewtonianOperator::apply(const RealVector& f) const {
  const RealVector root = weights.cwiseSqrt();
  return (symmetric * (root.cwiseProduct(f))).cwiseQuotient(root);
}

NewtonianOperator assemble_R0(const DomainSpec& domain, double V0, double spacing, const NewtonianOptions& options) {
  if (!(V0 > 0.0)) throw InvalidArgument("R0: V0 must be positive");
  NewtonianOperator op;
  op.grid = make_volume_grid(domain, spacing, options.exterior_layers);
  op.cells = op.grid.support();
  if (op.cells.size() > options.cell_cap) throw InvalidArgument("R0: cell count exceeds the dense eigensolve cap");
  op.V0 = V0;
  const auto n = static_cast<Eigen::Index>(op.cells.size());
  op.weights.resize(n);
  std::vector<Point3> x(op.cells.size());
  for (Eigen::Index i = 0; i < n; ++i) {
    op.weights[i] = op.grid.weight(op.cells[i]);
    x[i] = op.grid.center(op.cells[i]);
  }
  const RealVector root = op.weights.cwiseSqrt();
  op.symmetric.resize(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    op.symmetric(j, j) = V0 * self_ball_integral(op.weights[j]);
    for (Eigen::Index i = j + 1; i < n; ++i) {
      const double v = V0 * root[i] * root[j] / (four_pi * (x[i] - x[j]).norm());
      op.symmetric(i, j) = v;
      op.symmetric(j, i) = v;
    }
  }
  return op;
}

SpectralDecomposition eigendecompose(const NewtonianOperator& op) {
  const auto n = static_cast<Eigen::Index>(op.size());
  if (n == 0) throw InvalidArgument("eigendecompose: empty operator");
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(op.symmetric);
  if (solver.info() != Eigen::Success) throw Error("eigendecompose: symmetric eigensolver did not converge");
  const RealVector& w = solver.eigenvalues();  // ascending
  SpectralDecomposition dec;
  dec.spacing = op.grid.spacing;
  dec.V0 = op.V0;
  dec.min_eigenvalue = w[0];
  const double lmax = w[n - 1];
  std::vector<Eigen::Index> keep;
  for (Eigen::Index k = n - 1; k >= 0; --k) {
    if (w[k] >= 1e-12 * lmax) keep.push_back(k);
  }
  dec.dropped = static_cast<std::size_t>(n) - keep.size();
  dec.eigenvalues.resize(static_cast<Eigen::Index>(keep.size()));
  dec.eigenvectors.resize(n, static_cast<Eigen::Index>(keep.size()));
  const RealVector inv_root = op.weights.cwiseSqrt().cwiseInverse();
  for (std::size_t c = 0; c < keep.size(); ++c) {
    dec.eigenvalues[c] = w[keep[c]];
    dec.eigenvectors.col(c) = solver.eigenvectors().col(keep[c]).cwiseProduct(inv_root);
  }
  return dec;
}

double orthonormality_defect(const NewtonianOperator& op, const SpectralDecomposition& dec) {
  const Eigen::MatrixXd g = dec.eigenvectors.transpose() * op.weights.asDiagonal() * dec.eigenvectors;
  return (g - Eigen::MatrixXd::Identity(g.rows(), g.cols())).cwiseAbs().maxCoeff();
}

Eigen::MatrixXd BoundaryOperatorPair::robin_operator() const {
  const auto n = S.rows();
  const Eigen::MatrixXd rhs = K - 0.5 * Eigen::MatrixXd::Identity(n, n);
  return S.partialPivLu().solve(rhs);
}

BoundaryOperatorPair boundary_operators(const SurfaceMesh& mesh) {
  BoundaryOperatorPair pair;
  pair.panels = mesh.panels();
  pair.S = assemble_laplace_single_layer(pair.panels);
  pair.K = assemble_laplace_double_layer(pair.panels);
  return pair;
}

RealVector evaluate_mode(const NewtonianOperator& op, const RealVector& e, double lambda,
                         const std::vector<Point3>& points) {
  const auto n = static_cast<Eigen::Index>(op.size());
  std::vector<Point3> y(op.size());
  std::vector<double> rho(op.size());
  for (Eigen::Index j = 0; j < n; ++j) {
    y[j] = op.grid.center(op.cells[j]);
    rho[j] = std::cbrt(3.0 * op.weights[j] / four_pi);
  }
  RealVector out(static_cast<Eigen::Index>(points.size()));
  for (std::size_t p = 0; p < points.size(); ++p) {
    double sum = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      const double r = (points[p] - y[j]).norm();
      const double kernel = r >= rho[j] ? op.weights[j] / (four_pi * r) : (3.0 * rho[j] * rho[j] - r * r) / 6.0;
      sum += kernel * e[j];
    }
    out[p] = op.V0 * sum / lambda;
  }
  return out;
}

namespace {

// Mode values on the whole grid: the unknowns themselves on the support,
// the potential representation on the remaining cells adjacent to it.
std::vector<double> extend_to_grid(const NewtonianOperator& op, const RealVector& e, double lambda) {
  const VolumeGrid& g = op.grid;
  std::vector<double> full(g.size(), 0.0);
  std::vector<char> known(g.size(), 0);
  for (std::size_t j = 0; j < op.size(); ++j) {
    full[op.cells[j]] = e[j];
    known[op.cells[j]] = 1;
  }
  std::vector<std::size_t> missing;
  std::vector<Point3> pts;
  for (std::size_t j = 0; j < op.size(); ++j) {
    const auto c = g.coords(op.cells[j]);
    for (int a = 0; a < 3; ++a) {
      for (int s : {-1, 1}) {
        auto q = c;
        q[a] += s;
        if (q[a] < 0 || q[a] >= g.dims[a]) throw InvalidArgument("Robin residual: support touches the grid edge");
        const std::size_t idx = g.index(q[0], q[1], q[2]);
        if (!known[idx]) {
          known[idx] = 2;
          missing.push_back(idx);
          pts.push_back(g.center(idx));
        }
      }
    }
  }
  const RealVector vals = evaluate_mode(op, e, lambda, pts);
  for (std::size_t k = 0; k < missing.size(); ++k) full[missing[k]] = vals[k];
  return full;
}

double gradient_energy(const VolumeGrid& g, const std::vector<std::size_t>& cells, const RealVector& weights,
                       const std::vector<double>& full) {
  double grad = 0.0;
  for (std::size_t j = 0; j < cells.size(); ++j) {
    const auto c = g.coords(cells[j]);
    for (int a = 0; a < 3; ++a) {
      auto lo = c, hi = c;
      --lo[a];
      ++hi[a];
      const double d = (full[g.index(hi[0], hi[1], hi[2])] - full[g.index(lo[0], lo[1], lo[2])]) / (2.0 * g.spacing);
      grad += weights[j] * d * d;
    }
  }
  return grad;
}

}  // namespace

RobinResidual robin_residual_of(const NewtonianOperator& op, const RealVector& e, double lambda,
                                const BoundaryOperatorPair& pair) {
  const VolumeGrid& g = op.grid;
  RobinResidual res;
  res.lambda = lambda;
  const double mu = op.V0 / lambda;
  const double e_norm = std::sqrt(e.dot(op.weights.asDiagonal() * e));
  const std::vector<double> full = extend_to_grid(op, e, lambda);

  double interior = 0.0;
  const double h2 = g.spacing * g.spacing;
  for (std::size_t j = 0; j < op.size(); ++j) {
    const auto c = g.coords(op.cells[j]);
    if (!g.domain.contains(g.center(op.cells[j]))) continue;
    bool inner = true;
    double lap = -6.0 * full[op.cells[j]];
    for (int a = 0; a < 3 && inner; ++a) {
      for (int s : {-1, 1}) {
        auto q = c;
        q[a] += s;
        const std::size_t idx = g.index(q[0], q[1], q[2]);
        if (g.fraction[idx] == 0.0 || !g.domain.contains(g.center(idx))) {
          inner = false;
          break;
        }
        lap += full[idx];
      }
    }
    if (!inner) continue;
    const double r = -lap / h2 - mu * e[j];
    interior += op.weights[j] * r * r;
  }
  res.interior = std::sqrt(interior) / e_norm;

  const std::size_t np = pair.panels.size();
  std::vector<Point3> pts;
  pts.reserve(3 * np);
  const double delta = g.spacing;
  for (const auto& p : pair.panels) {
    pts.push_back(p.centroid);
    pts.push_back(p.centroid - delta * p.normal);
    pts.push_back(p.centroid - 2.0 * delta * p.normal);
  }
  const RealVector vals = evaluate_mode(op, e, lambda, pts);
  RealVector eb(static_cast<Eigen::Index>(np)), dn(static_cast<Eigen::Index>(np)), area(static_cast<Eigen::Index>(np));
  for (std::size_t p = 0; p < np; ++p) {
    eb[p] = vals[3 * p];
    dn[p] = (3.0 * vals[3 * p] - 4.0 * vals[3 * p + 1] + vals[3 * p + 2]) / (2.0 * delta);
    area[p] = pair.panels[p].area;
  }
  const RealVector be = pair.robin_operator() * eb;
  const RealVector diff = dn - be;
  const double eb_norm = std::sqrt(eb.cwiseProduct(eb).dot(area));
  res.boundary = eb_norm > 0.0 ? std::sqrt(diff.cwiseProduct(diff).dot(area)) / eb_norm : 0.0;

  const double grad = gradient_energy(g, op.cells, op.weights, full);
  const double robin = be.cwiseProduct(eb).dot(area);
  res.rayleigh_lambda = op.V0 * e_norm * e_norm / (grad - robin);
  return res;
}

RobinResidual robin_correspondence_residual(const NewtonianOperator& op, const SpectralDecomposition& dec,
                                           const BoundaryOperatorPair& pair, std::size_t n) {
  if (n >= static_cast<std::size_t>(dec.eigenvalues.size())) throw InvalidArgument("Robin residual: mode index out of range");
  const double lambda = dec.eigenvalues[static_cast<Eigen::Index>(n)];
  if (lambda < 1e-3 * dec.eigenvalues[0]) throw InvalidArgument("Robin residual: mode not resolved by the grid");
  return robin_residual_of(op, dec.eigenvectors.col(static_cast<Eigen::Index>(n)), lambda, pair);
}

H1ProxyInterval h1_proxy_interval(const NewtonianOperator& op, const SpectralDecomposition& dec, int count,
                                  std::uint64_t seed) {
  const VolumeGrid& g = op.grid;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  std::uniform_int_distribution<int> wave(-2, 2);
  H1ProxyInterval out;
  out.low = infinity;
  out.high = 0.0;
  std::vector<double> full(g.size());
  for (int trial = 0; trial < count; ++trial) {
    std::vector<Vector3> ks;
    std::vector<double> amps, phases;
    for (int term = 0; term < 4; ++term) {
      ks.emplace_back(wave(rng), wave(rng), wave(rng));
      amps.push_back(unif(rng));
      phases.push_back(pi * unif(rng));
    }
    auto u = [&](const Point3& x) {
      double v = 0.0;
      for (std::size_t t = 0; t < ks.size(); ++t) v += amps[t] * std::cos(ks[t].dot(x) + phases[t]);
      return v;
    };
    for (std::size_t i = 0; i < g.size(); ++i) full[i] = u(g.center(i));
    RealVector f(static_cast<Eigen::Index>(op.size()));
    for (std::size_t j = 0; j < op.size(); ++j) f[j] = full[op.cells[j]];
    const double l2 = f.cwiseProduct(f).dot(op.weights);
    const double h1 = std::sqrt(l2 + gradient_energy(g, op.cells, op.weights, full));
    const RealVector coeff = dec.eigenvectors.transpose() * op.weights.cwiseProduct(f);
    double form = 0.0;
    for (Eigen::Index n = 0; n < coeff.size(); ++n) form += dec.V0 / dec.eigenvalues[n] * coeff[n] * coeff[n];
    const double ratio = std::sqrt(form) / h1;
    out.ratios.push_back(ratio);
    out.low = std::min(out.low, ratio);
    out.high = std::max(out.high, ratio);
  }
  return out;
}

void write_spectrum_csv(std::ostream& out, const SpectralDecomposition& dec, const std::vector<RobinResidual>& residuals) {
  out << "n,lambda_n,interior_residual,boundary_residual\n";
  for (std::size_t n = 0; n < residuals.size(); ++n) {
    out << n << ',' << format_double(dec.eigenvalues[static_cast<Eigen::Index>(n)]) << ','
        << format_double(residuals[n].interior) << ',' << format_double(residuals[n].boundary) << '\n';
  }
}

}  // namespace foldylab
