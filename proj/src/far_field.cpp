#include "foldylab/far_field.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "foldylab/greens.hpp"
#include "foldylab/summation.hpp"

namespace foldylab {

std::string to_string(Provenance p) {
  switch (p) {
    case Provenance::foldy: return "foldy";
    case Provenance::bem: return "bem";
    case Provenance::ls: return "ls";
    case Provenance::dirichlet: return "dirichlet";
  }
  return "unknown";
}

Provenance provenance_from_string(const std::string& s) {
  if (s == "foldy") return Provenance::foldy;
  if (s == "bem") return Provenance::bem;
  if (s == "ls") return Provenance::ls;
  if (s == "dirichlet") return Provenance::dirichlet;
  throw InvalidArgument("unknown provenance: " + s);
}

std::string format_double(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

void validate(const FarFieldPattern& pattern) {
  if (static_cast<std::size_t>(pattern.values.size()) != pattern.directions.size()) {
    throw InvalidArgument("far-field pattern: value/direction count mismatch");
  }
  for (const auto& d : pattern.directions) greens::require_unit(d, 1e-10);
  for (Eigen::Index i = 0; i < pattern.values.size(); ++i) {
    if (!std::isfinite(pattern.values[i].real()) || !std::isfinite(pattern.values[i].imag())) {
      throw InvalidArgument("far-field pattern has non-finite values");
    }
  }
}

double sup_abs(const FarFieldPattern& pattern) {
  return pattern.values.size() == 0 ? 0.0 : pattern.values.cwiseAbs().maxCoeff();
}

double sup_deviation(const FarFieldPattern& a, const FarFieldPattern& b) {
  if (a.directions.size() != b.directions.size()) {
    throw InvalidArgument("sup_deviation: patterns have different direction counts");
  }
  for (std::size_t i = 0; i < a.directions.size(); ++i) {
    if ((a.directions[i] - b.directions[i]).norm() > 1e-12) {
      throw InvalidArgument("sup_deviation: patterns use different directions");
    }
  }
  return a.size() == 0 ? 0.0 : (a.values - b.values).cwiseAbs().maxCoeff();
}

void write_csv(std::ostream& out, const FarFieldPattern& p) {
  out << "# kappa=" << format_double(p.kappa) << '\n';
  out << "# theta=" << format_double(p.incident_direction.x()) << ' ' << format_double(p.incident_direction.y())
      << ' ' << format_double(p.incident_direction.z()) << '\n';
  out << "# provenance=" << to_string(p.provenance) << '\n';
  for (const auto& [key, value] : p.metadata) out << "# " << key << '=' << value << '\n';
  out << "dir_x,dir_y,dir_z,re,im\n";
  for (std::size_t i = 0; i < p.directions.size(); ++i) {
    const auto& d = p.directions[i];
    out << format_double(d.x()) << ',' << format_double(d.y()) << ',' << format_double(d.z()) << ','
        << format_double(p.values[i].real()) << ',' << format_double(p.values[i].imag()) << '\n';
  }
}

void write_csv_file(const std::string& path, const FarFieldPattern& pattern) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  write_csv(out, pattern);
  if (!out) throw IoError("write failed: " + path);
}

FarFieldPattern read_csv(std::istream& in) {
  FarFieldPattern p;
  std::string line;
  std::vector<Complex> values;
  bool have_columns = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto eq = line.find('=');
      if (eq == std::string::npos) continue;
      std::string key = line.substr(1, eq - 1);
      key.erase(0, key.find_first_not_of(' '));
      const std::string value = line.substr(eq + 1);
      if (key == "kappa") {
        p.kappa = std::stod(value);
      } else if (key == "theta") {
        std::istringstream ts(value);
        ts >> p.incident_direction.x() >> p.incident_direction.y() >> p.incident_direction.z();
      } else if (key == "provenance") {
        p.provenance = provenance_from_string(value);
      } else {
        p.metadata[key] = value;
      }
      continue;
    }
    if (!have_columns) {
      if (line != "dir_x,dir_y,dir_z,re,im") throw IoError("far-field CSV: unexpected column header");
      have_columns = true;
      continue;
    }
    std::istringstream ls(line);
    double f[5];
    char comma;
    if (!(ls >> f[0] >> comma >> f[1] >> comma >> f[2] >> comma >> f[3] >> comma >> f[4])) {
      throw IoError("far-field CSV: bad row");
    }
    p.directions.emplace_back(f[0], f[1], f[2]);
    values.emplace_back(f[3], f[4]);
  }
  if (!have_columns) throw IoError("far-field CSV: missing column header");
  p.values = Eigen::Map<ComplexVector>(values.data(), static_cast<Eigen::Index>(values.size()));
  return p;
}

FarFieldPattern synthesize_far_field(double kappa, const Vector3& theta, const DirectionSet& directions,
                                     const std::vector<Point3>& sources, const ComplexVector& strengths,
                                     Provenance provenance) {
  if (static_cast<std::size_t>(strengths.size()) != sources.size()) {
    throw InvalidArgument("far field: source/strength count mismatch");
  }
  FarFieldPattern pattern;
  pattern.kappa = kappa;
  pattern.incident_direction = theta;
  pattern.directions = directions.directions;
  pattern.weights = directions.weights;
  pattern.provenance = provenance;
  pattern.values.resize(directions.size());
  std::vector<Complex> terms(sources.size());
  for (std::size_t i = 0; i < directions.size(); ++i) {
    const Vector3& xhat = directions.directions[i];
    greens::require_unit(xhat, 1e-10);
    for (std::size_t j = 0; j < sources.size(); ++j) {
      const double phase = -kappa * xhat.dot(sources[j]);
      terms[j] = Complex(std::cos(phase), std::sin(phase)) * strengths[j];
    }
    pattern.values[i] = pairwise_sum(std::span<const Complex>(terms)) / four_pi;
  }
  return pattern;
}

}  // namespace foldylab
