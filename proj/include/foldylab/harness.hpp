#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "foldylab/foldy_lax.hpp"
#include "foldylab/geometry.hpp"
#include "foldylab/types.hpp"

namespace foldylab {

/// Flat key=value text with optional [section] headers; keys are stored as
/// "section.key". '#' and ';' start comments.
class Config {
 public:
  static Config parse(std::istream& in);
  static Config parse_file(const std::string& path);
  static Config parse_string(const std::string& text);

  bool has(const std::string& key) const { return values_.count(key) != 0; }
  std::string get(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key, double fallback) const;
  std::vector<double> get_list(const std::string& key) const;
  void set(const std::string& key, const std::string& value) { values_[key] = value; }
  const std::map<std::string, std::string>& values() const { return values_; }

 private:
  std::map<std::string, std::string> values_;
};

/// Evaluates arithmetic in the variables s and t: numbers, + - * /, parentheses
/// and min(...) / max(...) with any number of arguments.
double evaluate_formula(const std::string& formula, double s, double t);

enum class ErrorKind { sup_farfield, foldy_vs_ls, ls_vs_dirichlet, foldy_vs_dirichlet };

std::string to_string(ErrorKind kind);
ErrorKind error_kind_from_string(const std::string& s);

struct SweepRow {
  double a = 0.0;
  std::size_t M = 0;
  double d = 0.0;
  double s = 0.0;
  double t = 0.0;
  double kappa = 0.0;
  double err = 0.0;
  ErrorKind err_kind = ErrorKind::sup_farfield;
  std::uint64_t seed = 0;
};

struct RateFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  std::size_t points = 0;
};

/// Least squares on (log a, log err). Needs >= 3 points, positive errors and distinct a.
RateFit fit_rate(const std::vector<std::pair<double, double>>& rows);

/// Predicted exponent of each error metric as formulas in s and t.
struct PredictedExponent {
  ErrorKind kind;
  Regime regime;
  const char* formula;
  // A second exponent stated for the same quantity, recorded next to the fit ("" if none).
  const char* alternate;
};

const std::vector<PredictedExponent>& predicted_exponents();
const PredictedExponent& predicted_exponent(ErrorKind kind);

struct RegimeConfig {
  DomainSpec domain = DomainSpec::ball(1.0);
  double kappa = 1.0;
  Vector3 theta = Vector3::UnitZ();
  double s = 1.0;
  std::string t_formula = "s/3";
  std::vector<double> a_list;
  std::uint64_t seed = 0;
  PlacementMode mode = PlacementMode::center;
  TilingAlignment alignment = TilingAlignment::cell_centered;
  double ls_spacing = 0.05;
  int direction_frequency = 4;  // icosphere vertices: 162 directions
  double cbar = 0.0;            // 0: diameter-1 reference sphere
  int dirichlet_mesh = 16;      // cube domains: panels per edge for the BEM reference
  double margin = 1e-2;
  FoldyLaxOptions solver;

  double t() const { return evaluate_formula(t_formula, s, std::nan("")); }
};

/// Builds a RegimeConfig from the [domain], [cloud], [solver] and [sweep] sections.
RegimeConfig regime_config_from(const Config& config);
Regime regime_from_config(const Config& config);

/// Runs the sweep of one regime. Throws InvalidArgument naming the binding
/// constraint if the regime conditions fail, or if a_list is not descending.
std::vector<SweepRow> run_regime(Regime regime, const RegimeConfig& config);

struct RateRow {
  Regime regime;
  ErrorKind kind;
  RateFit fit;
  double predicted = 0.0;
  bool monotone = false;
  bool within_tolerance = false;
  std::string alternate;  // alternate exponent value, if any
};

/// One rate row per (regime, err_kind) present in rows (at least 3 points each; fewer gives r_squared NaN).
std::vector<RateRow> summarize_rates(const std::vector<SweepRow>& rows);

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);
void write_rates_csv(std::ostream& out, const std::vector<RateRow>& rates);
void write_rate_svg(std::ostream& out, Regime regime, const std::vector<SweepRow>& rows, const std::vector<RateRow>& rates);

/// Writes sweep.csv, rates.csv and one regime_<name>.svg per regime with rows
/// into `directory`. Returns the written paths.
std::vector<std::string> emit_report(const std::vector<SweepRow>& rows, const std::string& directory);

Regime regime_of(ErrorKind kind);

}  // namespace foldylab
