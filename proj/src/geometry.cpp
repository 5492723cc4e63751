#include "foldylab/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>

#include "foldylab/capacitance.hpp"
#include "foldylab/far_field.hpp"

namespace foldylab {

DomainSpec DomainSpec::ball(double radius, const Point3& center) {
  DomainSpec d{DomainKind::ball, center, radius};
  d.validate();
  return d;
}

DomainSpec DomainSpec::cube(double half_side, const Point3& center) {
  DomainSpec d{DomainKind::cube, center, half_side};
  d.validate();
  return d;
}

void DomainSpec::validate() const {
  if (!(size > 0.0) || !std::isfinite(size)) throw InvalidArgument("domain: degenerate (non-positive size)");
}

double DomainSpec::signed_distance(const Point3& p) const {
  const Vector3 q = p - center;
  if (kind == DomainKind::ball) return q.norm() - size;
  const Vector3 d = q.cwiseAbs() - Vector3::Constant(size);
  const double outside = d.cwiseMax(0.0).norm();
  const double inside = std::min(d.maxCoeff(), 0.0);
  return outside + inside;
}

double DomainSpec::volume() const {
  return kind == DomainKind::ball ? 4.0 / 3.0 * pi * size * size * size : 8.0 * size * size * size;
}

double DomainSpec::surface_area() const {
  return kind == DomainKind::ball ? four_pi * size * size : 24.0 * size * size;
}

std::string to_string(DomainKind kind) { return kind == DomainKind::ball ? "ball" : "cube"; }

DomainKind domain_kind_from_string(const std::string& s) {
  if (s == "ball") return DomainKind::ball;
  if (s == "cube") return DomainKind::cube;
  throw InvalidArgument("unknown domain kind: " + s);
}

std::vector<Cell> partition_by_side(const DomainSpec& domain, double side, TilingAlignment alignment) {
  domain.validate();
  if (!(side > 0.0)) throw InvalidArgument("partition: cell side must be positive");
  const double offset = alignment == TilingAlignment::cell_centered ? 0.0 : 0.5;
  const int reach = static_cast<int>(std::ceil(domain.half_extent() / side)) + 1;
  const double half = 0.5 * side;
  std::vector<Cell> cells;
  for (int i = -reach; i <= reach; ++i) {
    for (int j = -reach; j <= reach; ++j) {
      for (int k = -reach; k <= reach; ++k) {
        const Point3 c = domain.center + side * Vector3(i + offset, j + offset, k + offset);
        bool inside = domain.signed_distance(c) < 0.0;
        for (int corner = 0; inside && corner < 8; ++corner) {
          const Vector3 delta((corner & 1) ? half : -half, (corner & 2) ? half : -half, (corner & 4) ? half : -half);
          inside = domain.signed_distance(c + delta) < 0.0;
        }
        if (inside) cells.push_back(Cell{c, side, {i, j, k}});
      }
    }
  }
  return cells;
}

std::vector<Cell> partition_domain(const DomainSpec& domain, double a, double s, TilingAlignment alignment) {
  if (!(a > 0.0 && a < 1.0)) throw InvalidArgument("partition: need 0 < a < 1");
  if (!(s > 0.0)) throw InvalidArgument("partition: need s > 0");
  return partition_by_side(domain, std::pow(a, s / 3.0), alignment);
}

std::string to_string(PlacementMode mode) { return mode == PlacementMode::center ? "center" : "jitter"; }

PlacementMode placement_mode_from_string(const std::string& s) {
  if (s == "center") return PlacementMode::center;
  if (s == "jitter") return PlacementMode::jitter;
  throw InvalidArgument("unknown placement mode: " + s);
}

double min_pair_distance(const std::vector<Point3>& points) {
  if (points.size() < 2) return infinity;
  std::vector<std::size_t> order(points.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t l, std::size_t r) {
    return points[l].x() < points[r].x() || (points[l].x() == points[r].x() && l < r);
  });
  double best = infinity;
  for (std::size_t i = 0; i < order.size(); ++i) {
    const Point3& p = points[order[i]];
    for (std::size_t j = i + 1; j < order.size(); ++j) {
      const Point3& q = points[order[j]];
      if (q.x() - p.x() >= best) break;
      best = std::min(best, (q - p).norm());
    }
  }
  return best;
}

namespace {

constexpr double distance_slack = 1e-9;

using CellKey = std::array<int, 3>;

}  // namespace

ObstacleCloud place_obstacles(const std::vector<Cell>& cells, double a, double s, double t,
                              const PlacementOptions& options) {
  if (!(a > 0.0 && a < 1.0)) throw InvalidArgument("placement: need 0 < a < 1");
  if (t < s / 3.0 - 1e-12) throw InvalidArgument("placement: need t >= s/3");
  ObstacleCloud cloud;
  cloud.a = a;
  cloud.s = s;
  cloud.t = t;
  cloud.seed = options.seed;
  cloud.shape_tag = options.shape_tag;
  const double cbar = options.cbar > 0.0 ? options.cbar : reference_sphere_capacitance();
  cloud.capacitance_per_obstacle = scale_capacitance(cbar, a);
  cloud.centers.reserve(cells.size());

  const double required = std::pow(a, t);
  if (options.mode == PlacementMode::center) {
    for (const auto& c : cells) cloud.centers.push_back(c.center);
  } else {
    std::mt19937_64 rng(options.seed);
    std::map<CellKey, std::size_t> placed;
    for (const auto& cell : cells) {
      const double room = 0.5 * (cell.side - a);
      if (!(room >= 0.0)) throw PlacementError("placement: obstacle larger than its cell", placed.size(), placed.size());
      std::uniform_real_distribution<double> u(-room, room);
      std::size_t blocker = 0;
      bool ok = false;
      Point3 z;
      for (int attempt = 0; attempt < options.max_attempts && !ok; ++attempt) {
        z = cell.center + Vector3(u(rng), u(rng), u(rng));
        ok = true;
        for (int di = -1; di <= 1 && ok; ++di) {
          for (int dj = -1; dj <= 1 && ok; ++dj) {
            for (int dk = -1; dk <= 1 && ok; ++dk) {
              auto it = placed.find({cell.index[0] + di, cell.index[1] + dj, cell.index[2] + dk});
              if (it == placed.end()) continue;
              if ((cloud.centers[it->second] - z).norm() < required) {
                ok = false;
                blocker = it->second;
              }
            }
          }
        }
      }
      if (!ok) {
        throw PlacementError("placement infeasible: obstacle " + std::to_string(cloud.centers.size()) +
                                 " conflicts with obstacle " + std::to_string(blocker) + " after retry budget",
                             blocker, cloud.centers.size());
      }
      placed.emplace(cell.index, cloud.centers.size());
      cloud.centers.push_back(z);
    }
  }
  cloud.d_min = min_pair_distance(cloud.centers);
  if (cloud.d_min < (1.0 - distance_slack) * required) {
    throw PlacementError("placement: minimum distance below a^t", 0, 0);
  }
  return cloud;
}

void validate_cloud(const ObstacleCloud& cloud, const DomainSpec* domain) {
  if (!(cloud.a > 0.0)) throw InvalidArgument("cloud: a must be positive");
  if (cloud.t < cloud.s / 3.0 - 1e-12) throw InvalidArgument("cloud: t < s/3");
  const double d = min_pair_distance(cloud.centers);
  const bool both_inf = std::isinf(d) && std::isinf(cloud.d_min);
  if (!both_inf && std::abs(d - cloud.d_min) > 1e-12 * std::max(1.0, d)) {
    throw InvalidArgument("cloud: stored d_min does not match the recomputed value");
  }
  if (d < (1.0 - distance_slack) * std::pow(cloud.a, cloud.t)) throw InvalidArgument("cloud: d_min < a^t");
  if (domain != nullptr) {
    for (const auto& z : cloud.centers) {
      if (!domain->contains(z)) throw InvalidArgument("cloud: obstacle centre outside the domain");
    }
    const double cap = std::ceil(domain->volume() * std::pow(cloud.a, -cloud.s) * (1.0 + 1e-12));
    if (static_cast<double>(cloud.size()) > cap) throw InvalidArgument("cloud: more obstacles than cells of volume a^s fit");
  }
}

// --- regime conditions -------------------------------------------------------

std::string to_string(Regime regime) {
  switch (regime) {
    case Regime::sub_one: return "sub_one";
    case Regime::one: return "one";
    case Regime::super_one: return "super_one";
  }
  return "unknown";
}

Regime regime_from_string(const std::string& s) {
  if (s == "sub_one") return Regime::sub_one;
  if (s == "one") return Regime::one;
  if (s == "super_one") return Regime::super_one;
  throw InvalidArgument("unknown regime: " + s);
}

namespace {

constexpr double comparison_slack = 1e-12;

struct Evaluation {
  std::vector<Constraint> range;   // constraints on t (and s >= 0)
  std::vector<Constraint> bounds;  // upper bounds on s
};

Evaluation evaluate(double s, double t, ConditionSet set, double margin) {
  Evaluation e;
  auto le = [](double lhs, double rhs) { return lhs <= rhs + comparison_slack; };
  auto lt = [](double lhs, double rhs) { return lhs < rhs - comparison_slack; };
  if (set == ConditionSet::expansion) {
    e.range.push_back({"t>=0", 0.0, le(0.0, t)});
    e.range.push_back({"t<=1", 1.0, le(t, 1.0)});
    e.range.push_back({"s>=0", 0.0, le(0.0, s)});
    const std::vector<std::pair<std::string, double>> b = {
        {"2", 2.0}, {"3t", 3.0 * t}, {"2-t", 2.0 - t}, {"3-3t", 3.0 - 3.0 * t}, {"(3-t)/2", 0.5 * (3.0 - t)}};
    for (const auto& [name, bound] : b) e.bounds.push_back({name, bound, le(s, bound)});
  } else {
    e.range.push_back({"t>=s/3", s / 3.0, le(s / 3.0, t)});
    e.range.push_back({"t<1", 1.0, lt(t, 1.0)});
    e.range.push_back({"s>=0", 0.0, le(0.0, s)});
    e.bounds.push_back({"(33/29)_-", 33.0 / 29.0 - margin, le(s, 33.0 / 29.0 - margin)});
    const std::vector<std::pair<std::string, double>> b = {{"2-t", 2.0 - t},
                                                           {"3-3t", 3.0 - 3.0 * t},
                                                           {"(3-t)/2", 0.5 * (3.0 - t)},
                                                           {"(4-t)/3", (4.0 - t) / 3.0},
                                                           {"(4-3t)/2", 0.5 * (4.0 - 3.0 * t)}};
    for (const auto& [name, bound] : b) e.bounds.push_back({name, bound, lt(s, bound)});
  }
  return e;
}

RegimeConditions summarize(double s, double t, Regime regime, Evaluation e, std::vector<Constraint> extra) {
  RegimeConditions rc;
  rc.s = s;
  rc.t = t;
  rc.regime = regime;
  rc.constraints = e.range;
  rc.constraints.insert(rc.constraints.end(), e.bounds.begin(), e.bounds.end());
  rc.constraints.insert(rc.constraints.end(), extra.begin(), extra.end());
  rc.satisfied = std::all_of(rc.constraints.begin(), rc.constraints.end(), [](const Constraint& c) { return c.satisfied; });
  if (rc.satisfied) {
    const auto tight = std::min_element(e.bounds.begin(), e.bounds.end(),
                                        [](const Constraint& l, const Constraint& r) { return l.bound < r.bound; });
    rc.binding_constraint = tight->name;
  } else {
    const auto first = std::find_if(rc.constraints.begin(), rc.constraints.end(),
                                    [](const Constraint& c) { return !c.satisfied; });
    rc.binding_constraint = first->name;
  }
  return rc;
}

}  // namespace

RegimeConditions check_conditions(double s, double t, ConditionSet set, double margin) {
  const Regime regime = s < 1.0 ? Regime::sub_one : (s == 1.0 ? Regime::one : Regime::super_one);
  return summarize(s, t, regime, evaluate(s, t, set, margin), {});
}

RegimeConditions check_regime_conditions(double s, double t, Regime regime, double margin) {
  std::vector<Constraint> extra;
  ConditionSet set = ConditionSet::expansion;
  switch (regime) {
    case Regime::sub_one: extra.push_back({"s<1", 1.0, s < 1.0}); break;
    case Regime::one: extra.push_back({"s=1", 1.0, std::abs(s - 1.0) <= comparison_slack}); break;
    case Regime::super_one:
      extra.push_back({"s>1", 1.0, s > 1.0});
      set = ConditionSet::dirichlet_limit;
      break;
  }
  return summarize(s, t, regime, evaluate(s, t, set, margin), std::move(extra));
}

// --- CSV -----------------------------------------------------------------

void write_cloud_csv(std::ostream& out, const ObstacleCloud& cloud) {
  out << "# a=" << format_double(cloud.a) << '\n';
  out << "# s=" << format_double(cloud.s) << '\n';
  out << "# t=" << format_double(cloud.t) << '\n';
  out << "# seed=" << cloud.seed << '\n';
  out << "# shape_tag=" << cloud.shape_tag << '\n';
  out << "# capacitance=" << format_double(cloud.capacitance_per_obstacle) << '\n';
  out << "m,z1,z2,z3\n";
  for (std::size_t m = 0; m < cloud.size(); ++m) {
    const auto& z = cloud.centers[m];
    out << m << ',' << format_double(z.x()) << ',' << format_double(z.y()) << ',' << format_double(z.z()) << '\n';
  }
}

void write_cloud_csv_file(const std::string& path, const ObstacleCloud& cloud) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  write_cloud_csv(out, cloud);
}

ObstacleCloud read_cloud_csv(std::istream& in) {
  ObstacleCloud cloud;
  std::string line;
  bool have_columns = false;
  bool have_capacitance = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto eq = line.find('=');
      if (eq == std::string::npos) continue;
      std::string key = line.substr(1, eq - 1);
      key.erase(0, key.find_first_not_of(' '));
      const std::string value = line.substr(eq + 1);
      try {
        if (key == "a") cloud.a = std::stod(value);
        else if (key == "s") cloud.s = std::stod(value);
        else if (key == "t") cloud.t = std::stod(value);
        else if (key == "seed") cloud.seed = std::stoull(value);
        else if (key == "shape_tag") cloud.shape_tag = value;
        else if (key == "capacitance") {
          cloud.capacitance_per_obstacle = std::stod(value);
          have_capacitance = true;
        }
      } catch (const std::logic_error&) {
        throw IoError("cloud CSV: bad header value for " + key);
      }
      continue;
    }
    if (!have_columns) {
      if (line != "m,z1,z2,z3") throw IoError("cloud CSV: unexpected column header");
      have_columns = true;
      continue;
    }
    std::istringstream ls(line);
    long m;
    double x, y, z;
    char comma;
    if (!(ls >> m >> comma >> x >> comma >> y >> comma >> z)) throw IoError("cloud CSV: bad row");
    cloud.centers.emplace_back(x, y, z);
  }
  if (!have_columns) throw IoError("cloud CSV: missing column header");
  if (!(cloud.a > 0.0)) throw IoError("cloud CSV: missing or invalid a");
  if (!have_capacitance) cloud.capacitance_per_obstacle = scale_capacitance(reference_sphere_capacitance(), cloud.a);
  cloud.d_min = min_pair_distance(cloud.centers);
  return cloud;
}

ObstacleCloud read_cloud_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  return read_cloud_csv(in);
}

}  // namespace foldylab
