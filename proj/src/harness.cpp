#include "foldylab/harness.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>

#include "foldylab/bem_oracle.hpp"
#include "foldylab/capacitance.hpp"
#include "foldylab/dirichlet_exterior.hpp"
#include "foldylab/lippmann_schwinger.hpp"
#include "foldylab/mesh.hpp"

namespace foldylab {

// --- config --------------------------------------------------------------

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

Config Config::parse(std::istream& in) {
  Config c;
  std::string section;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto hash = line.find_first_of("#;");
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw IoError("config line " + std::to_string(number) + ": unterminated section");
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw IoError("config line " + std::to_string(number) + ": expected key=value");
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw IoError("config line " + std::to_string(number) + ": empty key");
    c.values_[section.empty() ? key : section + "." + key] = trim(line.substr(eq + 1));
  }
  return c;
}

Config Config::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config " + path);
  return parse(in);
}

Config Config::parse_string(const std::string& text) {
  std::istringstream in(text);
  return parse(in);
}

std::string Config::get(const std::string& key, const std::string& fallback) const {
  const auto it = values_.find(key);
  return it == values_.end() ? fallback : it->second;
}

double Config::get_double(const std::string& key, double fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  try {
    return evaluate_formula(it->second, std::nan(""), std::nan(""));
  } catch (const Error&) {
    throw IoError("config: " + key + " is not a number");
  }
}

std::vector<double> Config::get_list(const std::string& key) const {
  std::vector<double> out;
  std::string item;
  std::istringstream in(get(key, ""));
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    try {
      out.push_back(evaluate_formula(item, std::nan(""), std::nan("")));
    } catch (const Error&) {
      throw IoError("config: bad entry in " + key);
    }
  }
  return out;
}

// --- formulas -------------------------------------------------------------

namespace {

class FormulaParser {
 public:
  FormulaParser(const std::string& text, double s, double t) : text_(text), s_(s), t_(t) {}

  double run() {
    const double v = expression();
    skip();
    if (pos_ != text_.size()) fail();
    return v;
  }

 private:
  [[noreturn]] void fail() const { throw InvalidArgument("cannot parse formula: " + text_); }

  void skip() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  double expression() {
    double v = term();
    for (;;) {
      if (accept('+')) v += term();
      else if (accept('-')) v -= term();
      else return v;
    }
  }

  double term() {
    double v = factor();
    for (;;) {
      if (accept('*')) v *= factor();
      else if (accept('/')) v /= factor();
      else return v;
    }
  }

  double factor() {
    if (accept('-')) return -factor();
    if (accept('+')) return factor();
    if (accept('(')) {
      const double v = expression();
      if (!accept(')')) fail();
      return v;
    }
    skip();
    if (pos_ >= text_.size()) fail();
    const char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      std::size_t used = 0;
      const double v = std::stod(text_.substr(pos_), &used);
      pos_ += used;
      return v;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t end = pos_;
      while (end < text_.size() && std::isalpha(static_cast<unsigned char>(text_[end]))) ++end;
      const std::string name = text_.substr(pos_, end - pos_);
      pos_ = end;
      if (name == "s") return variable(s_);
      if (name == "t") return variable(t_);
      if (name == "min" || name == "max") {
        if (!accept('(')) fail();
        double v = expression();
        while (accept(',')) v = name == "min" ? std::min(v, expression()) : std::max(v, expression());
        if (!accept(')')) fail();
        return v;
      }
    }
    fail();
  }

  double variable(double v) const {
    if (std::isnan(v)) fail();
    return v;
  }

  const std::string& text_;
  double s_;
  double t_;
  std::size_t pos_ = 0;
};

}  // namespace

double evaluate_formula(const std::string& formula, double s, double t) {
  return FormulaParser(formula, s, t).run();
}

// --- error kinds and predicted exponents ------------------------------------

std::string to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::sup_farfield: return "sup_farfield";
    case ErrorKind::foldy_vs_ls: return "foldy_vs_ls";
    case ErrorKind::ls_vs_dirichlet: return "ls_vs_dirichlet";
    case ErrorKind::foldy_vs_dirichlet: return "foldy_vs_dirichlet";
  }
  return "unknown";
}

ErrorKind error_kind_from_string(const std::string& s) {
  if (s == "sup_farfield") return ErrorKind::sup_farfield;
  if (s == "foldy_vs_ls") return ErrorKind::foldy_vs_ls;
  if (s == "ls_vs_dirichlet") return ErrorKind::ls_vs_dirichlet;
  if (s == "foldy_vs_dirichlet") return ErrorKind::foldy_vs_dirichlet;
  throw InvalidArgument("unknown error kind: " + s);
}

const std::vector<PredictedExponent>& predicted_exponents() {
  static const std::vector<PredictedExponent> table = {
      {ErrorKind::sup_farfield, Regime::sub_one, "1-s", ""},
      {ErrorKind::foldy_vs_ls, Regime::one, "min(1/3, 2-3*t)", ""},
      {ErrorKind::foldy_vs_dirichlet, Regime::super_one, "min((s-1)/4, (33-29*s)/12, 4-3*s-t, 4-2*s-3*t)", "1/10"},
      {ErrorKind::ls_vs_dirichlet, Regime::super_one, "(s-1)/4", ""},
  };
  return table;
}

const PredictedExponent& predicted_exponent(ErrorKind kind) {
  for (const auto& p : predicted_exponents()) {
    if (p.kind == kind) return p;
  }
  throw InvalidArgument("no predicted exponent for " + to_string(kind));
}

Regime regime_of(ErrorKind kind) { return predicted_exponent(kind).regime; }

// --- fitting ---------------------------------------------------------------

RateFit fit_rate(const std::vector<std::pair<double, double>>& rows) {
  if (rows.size() < 3) throw InvalidArgument("fit_rate: fewer than 3 points");
  std::vector<double> x, y;
  for (const auto& [a, err] : rows) {
    if (!(a > 0.0)) throw InvalidArgument("fit_rate: non-positive a");
    if (!(err > 0.0)) throw InvalidArgument("fit_rate: non-positive error");
    x.push_back(std::log(a));
    y.push_back(std::log(err));
  }
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (std::size_t j = i + 1; j < x.size(); ++j) {
      if (x[i] == x[j]) throw InvalidArgument("fit_rate: repeated a");
    }
  }
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  RateFit f;
  f.points = x.size();
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  f.r_squared = syy == 0.0 ? 1.0 : sxy * sxy / (sxx * syy);
  return f;
}

// --- configuration ----------------------------------------------------------

Regime regime_from_config(const Config& c) { return regime_from_string(c.get("sweep.regime", "one")); }

RegimeConfig regime_config_from(const Config& c) {
  RegimeConfig r;
  const std::string kind = c.get("domain.kind", "ball");
  const double size = c.get_double("domain.size", 1.0);
  const Point3 center(c.get_double("domain.center_x", 0.0), c.get_double("domain.center_y", 0.0),
                      c.get_double("domain.center_z", 0.0));
  r.domain = domain_kind_from_string(kind) == DomainKind::ball ? DomainSpec::ball(size, center)
                                                               : DomainSpec::cube(size, center);
  r.s = c.get_double("cloud.s", 1.0);
  r.t_formula = c.get("cloud.t", "s/3");
  r.a_list = c.get_list("cloud.a_list");
  r.seed = static_cast<std::uint64_t>(c.get_double("cloud.seed", 0.0));
  r.mode = placement_mode_from_string(c.get("cloud.mode", "center"));
  const std::string align = c.get("cloud.alignment", "cell");
  if (align == "cell") r.alignment = TilingAlignment::cell_centered;
  else if (align == "vertex") r.alignment = TilingAlignment::vertex_centered;
  else throw IoError("config: cloud.alignment must be cell or vertex");
  r.cbar = c.get_double("cloud.cbar", 0.0);
  r.margin = c.get_double("cloud.margin", 1e-2);
  r.kappa = c.get_double("solver.kappa", 1.0);
  r.theta = unit(Vector3(c.get_double("solver.theta_x", 0.0), c.get_double("solver.theta_y", 0.0),
                         c.get_double("solver.theta_z", 1.0)));
  r.ls_spacing = c.get_double("solver.spacing", 0.05);
  r.direction_frequency = static_cast<int>(c.get_double("solver.directions", 4));
  r.dirichlet_mesh = static_cast<int>(c.get_double("solver.dirichlet_mesh", 16));
  r.solver.tolerance = c.get_double("solver.tolerance", r.solver.tolerance);
  r.solver.direct_cap = static_cast<std::size_t>(c.get_double("solver.direct_cap", 8000));
  return r;
}

// --- sweeps -----------------------------------------------------------------

namespace {

FarFieldPattern dirichlet_reference(const RegimeConfig& c, const DirectionSet& dirs) {
  if (c.domain.kind == DomainKind::ball) {
    PartialWaveConfig pw;
    pw.radius = c.domain.size;
    pw.kappa = c.kappa;
    FarFieldPattern p = mie_far_field(pw, c.theta, dirs);
    for (std::size_t i = 0; i < p.size(); ++i) {
      const double phase = c.kappa * (c.theta - p.directions[i]).dot(c.domain.center);
      p.values[i] *= Complex(std::cos(phase), std::sin(phase));
    }
    return p;
  }
  MultiBodyScene scene;
  scene.kappa = c.kappa;
  scene.theta = c.theta;
  scene.bodies.push_back(make_cube_mesh(c.dirichlet_mesh, 2.0 * c.domain.size, c.domain.center));
  FarFieldPattern p = far_field_of_densities(solve_multibody(scene), dirs);
  p.provenance = Provenance::dirichlet;
  return p;
}

FarFieldPattern ls_pattern(const RegimeConfig& c, double amplitude, double cbar, const DirectionSet& dirs) {
  LsProblem problem;
  problem.domain = c.domain;
  problem.kappa = c.kappa;
  problem.theta = c.theta;
  problem.amplitude = amplitude;
  problem.coefficient = cbar;
  problem.spacing = c.ls_spacing;
  return ls_far_field(solve_ls(problem), dirs);
}

}  // namespace

std::vector<SweepRow> run_regime(Regime regime, const RegimeConfig& c) {
  const double t = c.t();
  const RegimeConditions cond = check_regime_conditions(c.s, t, regime, c.margin);
  if (!cond.satisfied) {
    throw InvalidArgument("regime " + to_string(regime) + " conditions fail: binding constraint " + cond.binding_constraint);
  }
  if (c.a_list.empty()) throw InvalidArgument("sweep: empty a_list");
  for (std::size_t i = 1; i < c.a_list.size(); ++i) {
    if (!(c.a_list[i] < c.a_list[i - 1])) throw InvalidArgument("sweep: a_list must be strictly descending");
  }
  const DirectionSet dirs = icosphere_directions(c.direction_frequency);
  const double cbar = c.cbar > 0.0 ? c.cbar : reference_sphere_capacitance();

  std::optional<FarFieldPattern> reference;  // a-independent comparison pattern
  if (regime == Regime::one) reference = ls_pattern(c, 1.0, cbar, dirs);
  if (regime == Regime::super_one) reference = dirichlet_reference(c, dirs);

  std::vector<SweepRow> rows;
  for (const double a : c.a_list) {
    const auto cells = partition_domain(c.domain, a, c.s, c.alignment);
    if (cells.empty()) throw InvalidArgument("sweep: no interior cells at a = " + format_double(a));
    PlacementOptions po;
    po.mode = c.mode;
    po.seed = c.seed;
    po.cbar = cbar;
    const ObstacleCloud cloud = place_obstacles(cells, a, c.s, t, po);
    const FoldyLaxSystem system = solve_foldy_lax(cloud, WaveNumber(c.kappa), c.theta, c.solver);
    const FarFieldPattern foldy = far_field(system, dirs);

    SweepRow row;
    row.a = a;
    row.M = cloud.size();
    row.d = cloud.d_min;
    row.s = c.s;
    row.t = t;
    row.kappa = c.kappa;
    row.seed = c.seed;
    switch (regime) {
      case Regime::sub_one:
        row.err = sup_abs(foldy);
        row.err_kind = ErrorKind::sup_farfield;
        rows.push_back(row);
        break;
      case Regime::one:
        row.err = sup_deviation(foldy, *reference);
        row.err_kind = ErrorKind::foldy_vs_ls;
        rows.push_back(row);
        break;
      case Regime::super_one: {
        row.err = sup_deviation(foldy, *reference);
        row.err_kind = ErrorKind::foldy_vs_dirichlet;
        rows.push_back(row);
        const FarFieldPattern ls = ls_pattern(c, std::pow(a, 1.0 - c.s), cbar, dirs);
        row.err = sup_deviation(ls, *reference);
        row.err_kind = ErrorKind::ls_vs_dirichlet;
        rows.push_back(row);
        break;
      }
    }
  }
  return rows;
}

// --- report -----------------------------------------------------------------

std::vector<RateRow> summarize_rates(const std::vector<SweepRow>& rows) {
  std::vector<RateRow> out;
  for (const auto& p : predicted_exponents()) {
    std::vector<const SweepRow*> series;
    for (const auto& r : rows) {
      if (r.err_kind == p.kind) series.push_back(&r);
    }
    if (series.empty()) continue;
    RateRow rr;
    rr.regime = p.regime;
    rr.kind = p.kind;
    rr.predicted = evaluate_formula(p.formula, series.front()->s, series.front()->t);
    if (*p.alternate) rr.alternate = format_double(evaluate_formula(p.alternate, series.front()->s, series.front()->t));
    std::vector<std::pair<double, double>> pts;
    for (const auto* r : series) pts.emplace_back(r->a, r->err);
    std::sort(pts.begin(), pts.end(), [](const auto& l, const auto& r) { return l.first > r.first; });
    rr.monotone = true;
    for (std::size_t i = 1; i < pts.size(); ++i) rr.monotone = rr.monotone && pts[i].second < pts[i - 1].second;
    if (pts.size() >= 3) {
      rr.fit = fit_rate(pts);
    } else {
      rr.fit.points = pts.size();
      rr.fit.slope = rr.fit.intercept = rr.fit.r_squared = std::nan("");
    }
    // super_one slopes are not resolvable at reachable a; only the trend is judged there
    if (p.regime == Regime::super_one) rr.within_tolerance = rr.monotone;
    else rr.within_tolerance = rr.monotone && std::abs(rr.fit.slope - rr.predicted) <= 0.2;
    out.push_back(rr);
  }
  return out;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << "a,M,d,s,t,kappa,err,err_kind,seed\n";
  for (const auto& r : rows) {
    out << format_double(r.a) << ',' << r.M << ',' << format_double(r.d) << ',' << format_double(r.s) << ','
        << format_double(r.t) << ',' << format_double(r.kappa) << ',' << format_double(r.err) << ','
        << to_string(r.err_kind) << ',' << r.seed << '\n';
  }
}

void write_rates_csv(std::ostream& out, const std::vector<RateRow>& rates) {
  out << "regime,slope,predicted_exponent,within_tolerance,err_kind,intercept,r_squared,points,monotone,"
         "alternate_exponent,flag\n";
  for (const auto& r : rates) {
    const std::string flag = r.alternate.empty() ? "" : "alternate exponent differs from predicted";
    out << to_string(r.regime) << ',' << format_double(r.fit.slope) << ',' << format_double(r.predicted) << ','
        << (r.within_tolerance ? "true" : "false") << ',' << to_string(r.kind) << ',' << format_double(r.fit.intercept)
        << ',' << format_double(r.fit.r_squared) << ',' << r.fit.points << ',' << (r.monotone ? "true" : "false") << ','
        << r.alternate << ',' << flag << '\n';
  }
}

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

}  // namespace

void write_rate_svg(std::ostream& out, Regime regime, const std::vector<SweepRow>& rows, const std::vector<RateRow>& rates) {
  const double width = 640, height = 480, margin = 60;
  double xmin = infinity, xmax = -infinity, ymin = infinity, ymax = -infinity;
  for (const auto& r : rows) {
    if (regime_of(r.err_kind) != regime || !(r.err > 0.0)) continue;
    xmin = std::min(xmin, std::log10(r.a));
    xmax = std::max(xmax, std::log10(r.a));
    ymin = std::min(ymin, std::log10(r.err));
    ymax = std::max(ymax, std::log10(r.err));
  }
  if (xmin == xmax) {
    xmin -= 0.5;
    xmax += 0.5;
  }
  if (ymin == ymax) {
    ymin -= 0.5;
    ymax += 0.5;
  }
  const double padx = 0.05 * (xmax - xmin), pady = 0.15 * (ymax - ymin);
  xmin -= padx;
  xmax += padx;
  ymin -= pady;
  ymax += pady;
  auto px = [&](double lx) { return margin + (lx - xmin) / (xmax - xmin) * (width - 2 * margin); };
  auto py = [&](double ly) { return height - margin - (ly - ymin) / (ymax - ymin) * (height - 2 * margin); };
  const char* colors[] = {"#1f77b4", "#d62728"};

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << num(width / 2) << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">regime "
      << to_string(regime) << "</text>\n";
  out << "<line x1=\"" << margin << "\" y1=\"" << height - margin << "\" x2=\"" << width - margin << "\" y2=\""
      << height - margin << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << margin << "\" y1=\"" << margin << "\" x2=\"" << margin << "\" y2=\"" << height - margin
      << "\" stroke=\"black\"/>\n";
  out << "<text x=\"" << num(width / 2) << "\" y=\"" << height - 20 << "\" text-anchor=\"middle\">log10 a</text>\n";
  out << "<text x=\"18\" y=\"" << num(height / 2) << "\" transform=\"rotate(-90 18 " << num(height / 2)
      << ")\" text-anchor=\"middle\">log10 err</text>\n";
  for (int tick = 0; tick <= 4; ++tick) {
    const double lx = xmin + tick * (xmax - xmin) / 4, ly = ymin + tick * (ymax - ymin) / 4;
    out << "<text x=\"" << num(px(lx)) << "\" y=\"" << height - margin + 16 << "\" text-anchor=\"middle\" font-size=\"11\">"
        << num(lx) << "</text>\n";
    out << "<text x=\"" << margin - 6 << "\" y=\"" << num(py(ly) + 4) << "\" text-anchor=\"end\" font-size=\"11\">"
        << num(ly) << "</text>\n";
  }
  int series = 0;
  for (const auto& rate : rates) {
    if (rate.regime != regime) continue;
    const char* color = colors[series % 2];
    double first_x = 0.0, first_y = 0.0;
    bool have_first = false;
    for (const auto& r : rows) {
      if (r.err_kind != rate.kind || !(r.err > 0.0)) continue;
      const double lx = std::log10(r.a), ly = std::log10(r.err);
      if (!have_first) {
        first_x = lx;
        first_y = ly;
        have_first = true;
      }
      out << "<circle cx=\"" << num(px(lx)) << "\" cy=\"" << num(py(ly)) << "\" r=\"4\" fill=\"" << color << "\"/>\n";
    }
    if (std::isfinite(rate.fit.slope)) {
      const double y0 = (rate.fit.intercept + rate.fit.slope * xmin * std::log(10.0)) / std::log(10.0);
      const double y1 = (rate.fit.intercept + rate.fit.slope * xmax * std::log(10.0)) / std::log(10.0);
      out << "<line x1=\"" << num(px(xmin)) << "\" y1=\"" << num(py(y0)) << "\" x2=\"" << num(px(xmax)) << "\" y2=\""
          << num(py(y1)) << "\" stroke=\"" << color << "\"/>\n";
    }
    if (have_first) {
      const double y0 = first_y + rate.predicted * (xmin - first_x);
      const double y1 = first_y + rate.predicted * (xmax - first_x);
      out << "<line x1=\"" << num(px(xmin)) << "\" y1=\"" << num(py(y0)) << "\" x2=\"" << num(px(xmax)) << "\" y2=\""
          << num(py(y1)) << "\" stroke=\"" << color << "\" stroke-dasharray=\"6 4\"/>\n";
    }
    out << "<text x=\"" << margin + 10 << "\" y=\"" << margin + 16 * (series + 1) << "\" fill=\"" << color
        << "\" font-size=\"12\">" << to_string(rate.kind) << ": slope " << num(rate.fit.slope) << ", predicted "
        << num(rate.predicted) << " (dashed)</text>\n";
    ++series;
  }
  out << "</svg>\n";
}

std::vector<std::string> emit_report(const std::vector<SweepRow>& rows, const std::string& directory) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(directory, ec);
  if (ec) throw IoError("cannot create " + directory);
  std::vector<std::string> written;
  const auto rates = summarize_rates(rows);
  auto open = [&](const std::string& name) {
    const std::string path = (fs::path(directory) / name).string();
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path);
    written.push_back(path);
    return out;
  };
  {
    auto out = open("sweep.csv");
    write_sweep_csv(out, rows);
  }
  {
    auto out = open("rates.csv");
    write_rates_csv(out, rates);
  }
  for (Regime regime : {Regime::sub_one, Regime::one, Regime::super_one}) {
    const bool any = std::any_of(rows.begin(), rows.end(), [&](const SweepRow& r) { return regime_of(r.err_kind) == regime; });
    if (!any) continue;
    auto out = open("regime_" + to_string(regime) + ".svg");
    write_rate_svg(out, regime, rows, rates);
  }
  return written;
}

}  // namespace foldylab
