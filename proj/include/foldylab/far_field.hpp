#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "foldylab/directions.hpp"
#include "foldylab/types.hpp"

namespace foldylab {

enum class Provenance { foldy, bem, ls, dirichlet };

std::string to_string(Provenance p);
Provenance provenance_from_string(const std::string& s);

/// Samples of U^inf(xhat, theta) over a direction set.
struct FarFieldPattern {
  double kappa = 0.0;
  Vector3 incident_direction = Vector3::UnitZ();
  std::vector<Vector3> directions;
  std::vector<double> weights;  // quadrature weights, may be empty
  ComplexVector values;
  Provenance provenance = Provenance::foldy;
  // Free-form run descriptors written to the CSV header (M, a, s, t, ...).
  std::map<std::string, std::string> metadata;

  std::size_t size() const { return directions.size(); }
};

/// Checks unit directions and finite values; throws InvalidArgument otherwise.
void validate(const FarFieldPattern& pattern);

double sup_abs(const FarFieldPattern& pattern);

/// max_i |a_i - b_i|; the two patterns must share directions.
double sup_deviation(const FarFieldPattern& a, const FarFieldPattern& b);

/// CSV with '#'-prefixed header lines (kappa, theta, provenance, metadata)
/// followed by the column line dir_x,dir_y,dir_z,re,im.
void write_csv(std::ostream& out, const FarFieldPattern& pattern);
void write_csv_file(const std::string& path, const FarFieldPattern& pattern);
FarFieldPattern read_csv(std::istream& in);

/// Pattern of a cloud of point sources: values[i] = (1/4 pi) sum_j e^{-i kappa xhat_i . y_j} q_j,
/// summed pairwise in a fixed order.
FarFieldPattern synthesize_far_field(double kappa, const Vector3& theta, const DirectionSet& directions,
                                     const std::vector<Point3>& sources, const ComplexVector& strengths,
                                     Provenance provenance);

/// Formats a double with round-trip precision.
std::string format_double(double value);

}  // namespace foldylab
