#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "foldylab/types.hpp"

namespace foldylab {

enum class DomainKind { ball, cube };

/// Bounded domain Omega: a ball (size = radius) or an axis-aligned cube (size = half side).
struct DomainSpec {
  DomainKind kind = DomainKind::ball;
  Point3 center = Point3::Zero();
  double size = 1.0;

  static DomainSpec ball(double radius, const Point3& center = Point3::Zero());
  static DomainSpec cube(double half_side, const Point3& center = Point3::Zero());

  /// Negative inside, zero on the boundary, positive outside (exact for both kinds).
  double signed_distance(const Point3& p) const;
  bool contains(const Point3& p) const { return signed_distance(p) < 0.0; }
  double volume() const;
  double surface_area() const;
  /// Half extent of the axis-aligned bounding box.
  double half_extent() const { return size; }
  /// Throws InvalidArgument on non-positive size.
  void validate() const;
};

std::string to_string(DomainKind kind);
DomainKind domain_kind_from_string(const std::string& s);

/// Relative position of the tiling: a cell centred on the domain centre, or a
/// cell vertex at the domain centre.
enum class TilingAlignment { cell_centered, vertex_centered };

struct Cell {
  Point3 center;
  double side = 0.0;
  std::array<int, 3> index{};
};

/// Cubes of side a^{s/3} tiling the bounding box of Omega; only cells whose
/// closure lies strictly inside Omega are returned (8 vertices and the
/// centroid tested against the signed distance).
std::vector<Cell> partition_domain(const DomainSpec& domain, double a, double s,
                                   TilingAlignment alignment = TilingAlignment::cell_centered);

/// Same as partition_domain with an explicit cell side.
std::vector<Cell> partition_by_side(const DomainSpec& domain, double side,
                                    TilingAlignment alignment = TilingAlignment::cell_centered);

enum class PlacementMode { center, jitter };

std::string to_string(PlacementMode mode);
PlacementMode placement_mode_from_string(const std::string& s);

/// Discrete scatterer configuration: one obstacle of diameter a per interior cell.
struct ObstacleCloud {
  std::vector<Point3> centers;
  double a = 0.0;
  double s = 0.0;
  double t = 0.0;
  double d_min = infinity;                  // measured minimum centre distance (+inf for M = 1)
  double capacitance_per_obstacle = 0.0;    // C_m = cbar * a
  std::string shape_tag = "sphere";
  std::uint64_t seed = 0;

  std::size_t size() const { return centers.size(); }
  double cbar() const { return capacitance_per_obstacle / a; }
};

struct PlacementOptions {
  PlacementMode mode = PlacementMode::center;
  std::uint64_t seed = 0;
  int max_attempts = 2000;
  // Reference-shape capacitance (diameter-1 shape). Zero selects the
  // diameter-1 sphere computed by the capacitance module.
  double cbar = 0.0;
  std::string shape_tag = "sphere";
};

class PlacementError : public Error {
 public:
  PlacementError(const std::string& what, std::size_t first, std::size_t second)
      : Error(what), first_(first), second_(second) {}
  std::size_t first() const { return first_; }
  std::size_t second() const { return second_; }

 private:
  std::size_t first_;
  std::size_t second_;
};

/// Places one obstacle per cell. mode=center uses the cell centroids; mode=jitter
/// perturbs uniformly inside each cell (keeping the obstacle inside it) subject
/// to centre distances >= a^t, deterministically for a fixed seed.
ObstacleCloud place_obstacles(const std::vector<Cell>& cells, double a, double s, double t,
                              const PlacementOptions& options = {});

/// Minimum pairwise distance; +inf for fewer than two points.
double min_pair_distance(const std::vector<Point3>& points);

/// Recomputes d_min and checks the cloud invariants; throws InvalidArgument on violation.
void validate_cloud(const ObstacleCloud& cloud, const DomainSpec* domain = nullptr);

// --- asymptotic-regime conditions ------------------------------------------

enum class Regime { sub_one, one, super_one };

std::string to_string(Regime regime);
Regime regime_from_string(const std::string& s);

/// Which inequality system to evaluate: the far-field expansion conditions
/// (0<=t<=1, s <= min{2, 3t, 2-t, 3-3t, (3-t)/2}) or the Dirichlet-limit
/// conditions (s/3 <= t < 1, s < min{(33/29)_-, 2-t, 3-3t, (3-t)/2, (4-t)/3, (4-3t)/2}).
enum class ConditionSet { expansion, dirichlet_limit };

struct Constraint {
  std::string name;
  double bound = 0.0;  // right-hand side the constrained quantity is compared to
  bool satisfied = false;
};

struct RegimeConditions {
  double s = 0.0;
  double t = 0.0;
  Regime regime = Regime::one;
  bool satisfied = false;
  // Tightest bound on s when satisfied; first violated constraint otherwise.
  std::string binding_constraint;
  std::vector<Constraint> constraints;
};

/// margin implements the (33/29)_- bound as s <= 33/29 - margin.
RegimeConditions check_conditions(double s, double t, ConditionSet set, double margin = 1e-2);

/// Evaluates the condition system of the regime (expansion for s <= 1,
/// Dirichlet limit for s > 1) plus the regime's own range for s.
RegimeConditions check_regime_conditions(double s, double t, Regime regime, double margin = 1e-2);

// --- CSV -------------------------------------------------------------------

/// Columns m,z1,z2,z3; '#' header lines record a, s, t, seed, shape_tag and the capacitance.
void write_cloud_csv(std::ostream& out, const ObstacleCloud& cloud);
void write_cloud_csv_file(const std::string& path, const ObstacleCloud& cloud);
ObstacleCloud read_cloud_csv(std::istream& in);
ObstacleCloud read_cloud_csv_file(const std::string& path);

}  // namespace foldylab
