#include "foldylab/lippmann_schwinger.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "foldylab/greens.hpp"
#include "foldylab/krylov.hpp"

namespace foldylab {

Complex self_term(double kappa, double weight) {
  return Complex(self_ball_integral(weight), kappa * weight / four_pi);
}

namespace {

class VolumePotential {
 public:
  VolumePotential(const VolumeGrid& grid, double kappa, const std::vector<double>& potential)
      : grid_(grid), kappa_(kappa), potential_(potential), conv_(grid.dims, grid.spacing, kappa) {
    self_.resize(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) self_[i] = grid.fraction[i] > 0.0 ? self_term(kappa, grid.weight(i)) : 0.0;
  }

  std::vector<Complex> density(const std::vector<Complex>& f) const {
    std::vector<Complex> g(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) g[i] = potential_[i] * grid_.weight(i) * f[i];
    return g;
  }

  void apply(const std::vector<Complex>& f, std::vector<Complex>& out) {
    conv_.apply(density(f), out);
    for (std::size_t i = 0; i < f.size(); ++i) out[i] += self_[i] * potential_[i] * f[i];
  }

  Complex direct_row(std::size_t row, const std::vector<Complex>& g, const std::vector<Complex>& f) const {
    return conv_.direct_row(row, g) + self_[row] * potential_[row] * f[row];
  }

 private:
  const VolumeGrid& grid_;
  double kappa_;
  const std::vector<double>& potential_;
  GridConvolution conv_;
  std::vector<Complex> self_;
};

std::vector<Complex> plane_wave(const VolumeGrid& grid, double kappa, const Vector3& theta) {
  std::vector<Complex> u(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double phase = kappa * grid.center(i).dot(theta);
    u[i] = Complex(std::cos(phase), std::sin(phase));
  }
  return u;
}

}  // namespace

std::vector<Complex> apply_volume_potential(const VolumeGrid& grid, double kappa, const std::vector<double>& potential,
                                            const std::vector<Complex>& f) {
  if (potential.size() != grid.size() || f.size() != grid.size()) throw InvalidArgument("volume potential: size mismatch");
  VolumePotential op(grid, kappa, potential);
  std::vector<Complex> out;
  op.apply(f, out);
  return out;
}

void check_ls_resolution(const LsProblem& p) {
  if (!(p.spacing > 0.0)) throw InvalidArgument("LS: spacing must be positive");
  if (p.kappa > 0.0 && 2.0 * pi / p.kappa < 10.0 * p.spacing * (1.0 - 1e-12)) {
    throw InvalidArgument("LS: under-resolved grid (fewer than 10 cells per wavelength)");
  }
  if (p.amplitude > 1.0 && p.spacing > 0.25 * semiclassical_h(p.amplitude) * (1.0 + 1e-12)) {
    throw InvalidArgument("LS: under-resolved grid (spacing > h/4)");
  }
}

VolumeField solve_ls(const LsProblem& problem, const LsOptions& options) {
  if (!(problem.amplitude >= 0.0) || !(problem.coefficient >= 0.0)) {
    throw InvalidArgument("LS: amplitude and coefficient must be non-negative");
  }
  greens::require_unit(problem.theta, 1e-10);
  if (options.check_resolution) check_ls_resolution(problem);
  VolumeField field;
  field.grid = make_volume_grid(problem.domain, problem.spacing, options.exterior_layers);
  field.kappa = problem.kappa;
  field.theta = problem.theta;
  field.amplitude = problem.amplitude;
  field.coefficient = problem.coefficient;
  const VolumeGrid& grid = field.grid;
  field.potential.assign(grid.size(), 0.0);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (grid.fraction[i] > 0.0) field.potential[i] = problem.coefficient;
  }
  const std::vector<Complex> incident = plane_wave(grid, problem.kappa, problem.theta);
  if (problem.amplitude == 0.0 || problem.coefficient == 0.0) {
    field.values = incident;
    return field;
  }

  const std::vector<std::size_t> support = grid.support();
  const auto n = static_cast<Eigen::Index>(support.size());
  VolumePotential op(grid, problem.kappa, field.potential);
  std::vector<Complex> full(grid.size()), image;
  auto apply = [&](const ComplexVector& v, ComplexVector& out) {
    std::fill(full.begin(), full.end(), Complex(0.0));
    for (Eigen::Index i = 0; i < n; ++i) full[support[i]] = v[i];
    op.apply(full, image);
    for (Eigen::Index i = 0; i < n; ++i) out[i] = v[i] + problem.amplitude * image[support[i]];
  };
  ComplexVector rhs(n);
  for (Eigen::Index i = 0; i < n; ++i) rhs[i] = incident[support[i]];
  KrylovOptions ko;
  ko.tolerance = options.tolerance;
  ko.max_iterations = options.max_iterations;
  ko.restart = options.restart;
  KrylovResult kr = gmres(apply, rhs, ko, &rhs);
  if (!kr.converged) throw ConvergenceError("LS: GMRES did not converge", kr.iterations, kr.relative_residual);
  field.iterations = kr.iterations;
  field.residual_norm = kr.relative_residual;

  std::fill(full.begin(), full.end(), Complex(0.0));
  for (Eigen::Index i = 0; i < n; ++i) full[support[i]] = kr.x[i];
  op.apply(full, image);
  field.values.resize(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) field.values[i] = incident[i] - problem.amplitude * image[i];
  for (Eigen::Index i = 0; i < n; ++i) field.values[support[i]] = kr.x[i];

  // independent check of the residual by direct summation
  const std::vector<Complex> g = op.density(full);
  const std::size_t rows = std::min<std::size_t>(support.size(), options.verify_rows);
  double num = 0.0, den = 0.0;
  for (std::size_t r = 0; r < rows; ++r) {
    const std::size_t row = support[r * support.size() / rows];
    const Complex lhs = full[row] + problem.amplitude * op.direct_row(row, g, full);
    num += std::norm(lhs - incident[row]);
    den += std::norm(incident[row]);
  }
  field.verified_rows = rows;
  field.verified_residual = rows ? std::sqrt(num / den) : 0.0;
  return field;
}

FarFieldPattern ls_far_field(const VolumeField& field, const DirectionSet& directions) {
  std::vector<Point3> sources;
  std::vector<Complex> strengths;
  for (std::size_t i = 0; i < field.grid.size(); ++i) {
    if (field.potential[i] == 0.0) continue;
    sources.push_back(field.grid.center(i));
    strengths.push_back(-field.amplitude * field.potential[i] * field.grid.weight(i) * field.values[i]);
  }
  const ComplexVector q = Eigen::Map<const ComplexVector>(strengths.data(), static_cast<Eigen::Index>(strengths.size()));
  FarFieldPattern p = synthesize_far_field(field.kappa, field.theta, directions, sources, q, Provenance::ls);
  p.metadata["amplitude"] = format_double(field.amplitude);
  p.metadata["coefficient"] = format_double(field.coefficient);
  p.metadata["spacing"] = format_double(field.grid.spacing);
  return p;
}

Complex interpolate(const VolumeField& field, const Point3& p) {
  const VolumeGrid& g = field.grid;
  const Vector3 u = (p - g.origin) / g.spacing;
  std::array<int, 3> base;
  std::array<double, 3> frac;
  for (int a = 0; a < 3; ++a) {
    const double fl = std::floor(u[a]);
    base[a] = static_cast<int>(fl);
    frac[a] = u[a] - fl;
    if (base[a] < 0 || base[a] + 1 >= g.dims[a]) throw InvalidArgument("interpolate: point outside the grid");
  }
  Complex v = 0.0;
  for (int c = 0; c < 8; ++c) {
    const int di = c & 1, dj = (c >> 1) & 1, dk = (c >> 2) & 1;
    const double w = (di ? frac[0] : 1.0 - frac[0]) * (dj ? frac[1] : 1.0 - frac[1]) * (dk ? frac[2] : 1.0 - frac[2]);
    v += w * field.values[g.index(base[0] + di, base[1] + dj, base[2] + dk)];
  }
  return v;
}

void boundary_samples(const DomainSpec& domain, int count, std::vector<Point3>& points, std::vector<double>& weights) {
  points.clear();
  weights.clear();
  if (domain.kind == DomainKind::ball) {
    const DirectionSet dirs = fibonacci_directions(count);
    for (const auto& d : dirs.directions) {
      points.push_back(domain.center + domain.size * d);
      weights.push_back(domain.surface_area() / count);
    }
    return;
  }
  const int m = std::max(1, static_cast<int>(std::lround(std::sqrt(count / 6.0))));
  const double side = 2.0 * domain.size;
  for (int axis = 0; axis < 3; ++axis) {
    for (int sign : {-1, 1}) {
      for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
          Vector3 q;
          q[axis] = sign * domain.size;
          q[(axis + 1) % 3] = -domain.size + (i + 0.5) * side / m;
          q[(axis + 2) % 3] = -domain.size + (j + 0.5) * side / m;
          points.push_back(domain.center + q);
          weights.push_back(side * side / (m * m));
        }
      }
    }
  }
}

NormReport norm_report(const VolumeField& field, int trace_points) {
  const VolumeGrid& g = field.grid;
  NormReport r;
  double l2 = 0.0, grad = 0.0;
  for (std::size_t idx = 0; idx < g.size(); ++idx) {
    if (g.fraction[idx] == 0.0) continue;
    const double w = g.weight(idx);
    l2 += w * std::norm(field.values[idx]);
    r.sup_norm = std::max(r.sup_norm, std::abs(field.values[idx]));
    const auto c = g.coords(idx);
    for (int a = 0; a < 3; ++a) {
      auto lo = c, hi = c;
      --lo[a];
      ++hi[a];
      if (lo[a] < 0 || hi[a] >= g.dims[a]) throw InvalidArgument("norm report: support touches the grid edge");
      const Complex d = (field.values[g.index(hi[0], hi[1], hi[2])] - field.values[g.index(lo[0], lo[1], lo[2])]) /
                        (2.0 * g.spacing);
      grad += w * std::norm(d);
    }
  }
  r.L2_interior = std::sqrt(l2);
  r.H1_interior = std::sqrt(l2 + grad);
  std::vector<Point3> pts;
  std::vector<double> wts;
  boundary_samples(g.domain, trace_points, pts, wts);
  double trace = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) trace += wts[i] * std::norm(interpolate(field, pts[i]));
  r.L2_boundary_trace = std::sqrt(trace);
  return r;
}

SupNormReport sup_norm_estimates(const VolumeField& field, double a, double s) {
  SupNormReport r;
  for (std::size_t i = 0; i < field.grid.size(); ++i) {
    if (field.grid.fraction[i] > 0.0) r.sup_norm = std::max(r.sup_norm, std::abs(field.values[i]));
  }
  r.predicted_order = std::pow(a, 0.5 * (1.0 - s));
  r.ratio = r.sup_norm / r.predicted_order;
  return r;
}

void write_volume_field_csv(std::ostream& out, const VolumeField& field) {
  out << "# kappa=" << format_double(field.kappa) << '\n';
  out << "# theta=" << format_double(field.theta.x()) << ' ' << format_double(field.theta.y()) << ' '
      << format_double(field.theta.z()) << '\n';
  out << "# amplitude=" << format_double(field.amplitude) << '\n';
  out << "# coefficient=" << format_double(field.coefficient) << '\n';
  out << "# spacing=" << format_double(field.grid.spacing) << '\n';
  out << "cell,y1,y2,y3,re,im\n";
  for (std::size_t i = 0; i < field.grid.size(); ++i) {
    if (field.grid.fraction[i] == 0.0) continue;
    const Point3 c = field.grid.center(i);
    out << i << ',' << format_double(c.x()) << ',' << format_double(c.y()) << ',' << format_double(c.z()) << ','
        << format_double(field.values[i].real()) << ',' << format_double(field.values[i].imag()) << '\n';
  }
}

}  // namespace foldylab
