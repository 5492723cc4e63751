// Acceptance run: one PASS/FAIL line per criterion, with the measured numbers.
// Usage: acceptance [--out DIR] [criterion numbers...]
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "foldylab/bem_oracle.hpp"
#include "foldylab/capacitance.hpp"
#include "foldylab/dirichlet_exterior.hpp"
#include "foldylab/foldy_lax.hpp"
#include "foldylab/harness.hpp"
#include "foldylab/lippmann_schwinger.hpp"
#include "foldylab/newtonian_spectrum.hpp"
#include "oracles.hpp"

using namespace foldylab;

namespace {

namespace fs = std::filesystem;

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    pass = pass && ok;
    if (!detail.empty()) detail += "; ";
    detail += what + (ok ? "" : " [miss]");
  }
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::string g3(double v) { return fmt("%.3g", v); }

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path out_dir = "acceptance_output";

// --- 1 -----------------------------------------------------------------------

Outcome capacitance_criterion() {
  Outcome o;
  const SurfaceMesh sphere = make_icosphere(5, 0.5);
  const Capacitance c = capacitance_of(sphere, {.estimate_error = false});
  const double rel = std::abs(c.value - 2 * pi) / (2 * pi);
  o.require(c.panel_count >= 500 && rel < 0.01,
            "C(unit-diameter sphere, " + std::to_string(c.panel_count) + " panels) = " + fmt("%.6f", c.value) +
                ", rel. err " + g3(rel) + " < 1e-2");
  double worst = 0.0;
  for (double eps : {0.1, 0.01}) {
    const double scaled = capacitance_of(sphere.scaled(eps), {.estimate_error = false}).value;
    worst = std::max(worst, std::abs(scaled - eps * c.value) / (eps * c.value));
  }
  o.require(worst < 1e-6, "scaling defect " + g3(worst) + " < 1e-6");
  return o;
}

// --- 2 -----------------------------------------------------------------------

ObstacleCloud point_cloud(std::vector<Point3> centers, double a) {
  ObstacleCloud c;
  c.centers = std::move(centers);
  c.a = a;
  c.capacitance_per_obstacle = 2 * pi * a;
  c.d_min = min_pair_distance(c.centers);
  return c;
}

double reciprocity_defect(const ObstacleCloud& cloud, double kappa, std::mt19937& rng) {
  std::normal_distribution<double> g;
  const Vector3 theta = Vector3(g(rng), g(rng), g(rng)).normalized();
  const Vector3 xhat = Vector3(g(rng), g(rng), g(rng)).normalized();
  const Complex f = far_field(solve_direct(cloud, WaveNumber(kappa), theta), DirectionSet{{xhat}, {}}).values[0];
  const Complex b = far_field(solve_direct(cloud, WaveNumber(kappa), -xhat), DirectionSet{{-theta}, {}}).values[0];
  return std::abs(f - b) / std::abs(f);
}

Outcome foldy_lax_criterion() {
  Outcome o;
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double pair_err = 0.0, recip = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const Point3 z1(u(rng), u(rng), u(rng)), z2(u(rng), u(rng), u(rng));
    const Vector3 theta = Vector3(u(rng), u(rng), u(rng)).normalized();
    const double kappa = 3.0 * (u(rng) + 1.0), a = 0.05 * (u(rng) + 1.1);
    const auto cloud = point_cloud({z1, z2}, a);
    const auto s = solve_direct(cloud, WaveNumber(kappa), theta);
    const double c = cloud.capacitance_per_obstacle, r = (z1 - z2).norm();
    const Complex off = c * std::exp(Complex(0, kappa * r)) / (4 * pi * r);
    const Complex b1 = -c * std::exp(Complex(0, kappa * z1.dot(theta)));
    const Complex b2 = -c * std::exp(Complex(0, kappa * z2.dot(theta)));
    const Complex det = 1.0 - off * off;
    const Complex q1 = (b1 - off * b2) / det, q2 = (b2 - off * b1) / det;
    pair_err = std::max({pair_err, std::abs(s.charges[0] - q1) / std::abs(q1), std::abs(s.charges[1] - q2) / std::abs(q2)});
    recip = std::max(recip, reciprocity_defect(cloud, kappa, rng));
  }
  o.require(pair_err < 1e-12, "M=2 vs hand solution " + g3(pair_err) + " < 1e-12");

  int held = 0, admissible = 0;
  double worst_ratio = 0.0;
  for (unsigned seed = 0; seed < 50; ++seed) {
    const int m = 20 + 180 * static_cast<int>(seed) / 49;
    const auto pts = oracle::random_points(m, 1.0, 0.05, seed);
    const double d = min_pair_distance(pts);
    const double a = 0.5 * 5.0 * pi / 3.0 * d / (2 * pi * std::sqrt(static_cast<double>(pts.size())));
    const auto cloud = point_cloud(pts, a);
    const auto r = verify_lemma_bound(solve_direct(cloud, WaveNumber(0.4), Vector3::UnitZ()));
    admissible += r.hypotheses_met;
    held += r.passed;
    worst_ratio = std::max({worst_ratio, r.sum_sq_y / r.sum_sq_bound, r.sum_abs_y / r.sum_abs_bound});
    recip = std::max(recip, reciprocity_defect(cloud, 0.4, rng));
  }
  o.require(admissible == 50 && held == 50, "lemma bounds hold on " + std::to_string(held) + "/50 admissible clouds (" +
                                                std::to_string(admissible) + " admissible, worst sum/bound " +
                                                g3(worst_ratio) + ")");
  o.require(recip < 1e-8, "reciprocity defect " + g3(recip) + " < 1e-8");
  return o;
}

// --- 3 -----------------------------------------------------------------------

Outcome bem_criterion() {
  Outcome o;
  const auto centers = oracle::random_points(10, 0.5, 0.3, 3);
  const double kappa = 1.0;
  const Vector3 theta = Vector3(1, 1, 1).normalized();
  const int frequency = 4;
  const DirectionSet dirs = icosphere_directions(4);
  double previous = infinity;
  bool monotone = true;
  std::string devs;
  double last_rel = 0.0;
  for (double a : {0.04, 0.02, 0.01}) {
    const double radius = a / 2;
    const auto bem = far_field_of_densities(solve_multibody(sphere_scene(centers, radius, frequency, kappa, theta)), dirs);
    ObstacleCloud cloud;
    cloud.centers = centers;
    cloud.a = a;
    cloud.capacitance_per_obstacle =
        capacitance_of(make_icosphere(frequency, radius, Point3::Zero(), SphereFit::area_matched), {.estimate_error = false}).value;
    cloud.d_min = min_pair_distance(centers);
    const auto fl = far_field(solve_direct(cloud, WaveNumber(kappa), theta), dirs);
    const double dev = sup_deviation(fl, bem);
    monotone = monotone && dev < previous;
    previous = dev;
    last_rel = dev / sup_abs(bem);
    devs += (devs.empty() ? "" : ", ") + g3(dev);
  }
  o.require(monotone, "deviation at a=0.04,0.02,0.01: " + devs + " decreasing");
  o.require(last_rel < 0.05, "relative deviation at a=0.01 " + g3(last_rel) + " < 0.05");
  return o;
}

// --- sweeps (4, 5, 7, 10) ----------------------------------------------------

std::string config_path(const std::string& name) { return std::string(FOLDYLAB_CONFIG_DIR) + "/" + name + ".cfg"; }

std::vector<SweepRow> run_config(const std::string& name, const fs::path& dir) {
  const Config cfg = Config::parse_file(config_path(name));
  const auto rows = run_regime(regime_from_config(cfg), regime_config_from(cfg));
  emit_report(rows, dir.string());
  return rows;
}

std::string describe(const std::vector<SweepRow>& rows, ErrorKind kind) {
  std::string s;
  for (const auto& r : rows) {
    if (r.err_kind != kind) continue;
    s += (s.empty() ? "" : ", ") + fmt("%g", r.a) + ":" + g3(r.err) + " (M=" + std::to_string(r.M) + ")";
  }
  return s;
}

Outcome sweep_criterion(const std::string& name, bool check_slope) {
  Outcome o;
  const auto rows = run_config(name, out_dir / name);
  for (const auto& rate : summarize_rates(rows)) {
    o.require(rate.monotone, to_string(rate.kind) + " " + describe(rows, rate.kind) + " decreasing");
    if (check_slope) {
      o.require(std::abs(rate.fit.slope - rate.predicted) <= 0.2,
                "slope " + fmt("%.3f", rate.fit.slope) + " within " + fmt("%.3f", rate.predicted) + " +- 0.2");
    } else {
      o.detail += "; slope " + fmt("%.3f", rate.fit.slope) + " (predicted " + fmt("%.3f", rate.predicted) +
                  (rate.alternate.empty() ? "" : ", alternate " + fmt("%.3f", std::stod(rate.alternate))) +
                  ", not judged)";
    }
  }
  return o;
}

Outcome determinism_criterion() {
  Outcome o;
  for (const std::string name : {"sub_one", "one", "super_one"}) {
    const fs::path first = out_dir / name;
    if (!fs::exists(first / "sweep.csv")) run_config(name, first);
    const fs::path again = out_dir / (name + "_rerun");
    fs::remove_all(again);
    run_config(name, again);
    bool same = true;
    for (const char* f : {"sweep.csv", "rates.csv"}) same = same && slurp((first / f).string()) == slurp((again / f).string());
    o.require(same, name + " CSVs byte-identical");
  }
  return o;
}

// --- 6 -----------------------------------------------------------------------

Outcome semiclassical_criterion() {
  Outcome o;
  std::vector<std::pair<double, double>> l2, trace;
  double h1_min = infinity, h1_max = 0.0;
  std::string rows;
  for (double h : {0.4, 0.3, 0.2, 0.15, 0.1}) {
    LsProblem p;
    p.domain = DomainSpec::ball(1.0);
    p.kappa = 1.0;
    p.amplitude = 1.0 / (h * h);
    p.coefficient = 2 * pi;
    p.spacing = std::min(0.05, h / 4);
    const VolumeField f = solve_ls(p);
    const NormReport n = norm_report(f);
    l2.emplace_back(h, n.L2_interior);
    trace.emplace_back(h, n.L2_boundary_trace);
    h1_min = std::min(h1_min, n.H1_interior);
    h1_max = std::max(h1_max, n.H1_interior);
    rows += (rows.empty() ? "" : ", ") + fmt("h=%g", h) + "[" + std::to_string(f.grid.dims[0]) + "^3]:" + g3(n.L2_interior) +
            "/" + g3(n.L2_boundary_trace) + "/" + g3(n.H1_interior);
  }
  const RateFit fl2 = fit_rate(l2), ftr = fit_rate(trace);
  o.detail = "L2/trace/H1 " + rows;
  o.require(std::abs(fl2.slope - 1.0) <= 0.2, "L2 slope " + fmt("%.3f", fl2.slope) + " within 1 +- 0.2");
  o.require(std::abs(ftr.slope - 0.5) <= 0.2, "trace slope " + fmt("%.3f", ftr.slope) + " within 0.5 +- 0.2");
  o.require(h1_max / h1_min < 2.0, "H1 spread x" + fmt("%.3f", h1_max / h1_min) + " < 2");
  return o;
}

// --- 8 -----------------------------------------------------------------------

Outcome spectral_criterion() {
  Outcome o;
  const BoundaryOperatorPair pair = boundary_operators(make_icosphere(8));
  std::vector<std::vector<double>> interior;
  std::vector<H1ProxyInterval> proxies;
  bool positive = true;
  double orth = 0.0;
  std::string sizes;
  for (int cells : {16, 20}) {
    const double spacing = 2.0 / cells;
    const auto op = assemble_R0(DomainSpec::ball(1.0), 1.0, spacing);
    const auto dec = eigendecompose(op);
    positive = positive && dec.eigenvalues.minCoeff() > 0.0;
    orth = std::max(orth, orthonormality_defect(op, dec));
    std::vector<double> res;
    for (std::size_t n = 0; n < 5; ++n) res.push_back(robin_correspondence_residual(op, dec, pair, n).interior);
    interior.push_back(res);
    proxies.push_back(h1_proxy_interval(op, dec));
    sizes += (sizes.empty() ? "" : ", ") + std::to_string(cells) + "^3: " + std::to_string(op.size()) + " cells, lambda_0 " +
             fmt("%.5f", dec.eigenvalues[0]);
  }
  o.detail = sizes;
  std::string ratios;
  bool shrink = true;
  for (std::size_t n = 0; n < 5; ++n) {
    const double r = interior[0][n] / interior[1][n];
    shrink = shrink && r >= 1.5;
    ratios += (ratios.empty() ? "" : ", ") + g3(interior[0][n]) + "->" + g3(interior[1][n]) + " (x" + fmt("%.2f", r) + ")";
  }
  o.require(shrink, "top-5 interior residuals " + ratios + " shrink >= x1.5");
  o.require(positive, "retained eigenvalues positive");
  o.require(orth < 1e-8, "orthonormality defect " + g3(orth) + " < 1e-8");
  const double drift = std::max({proxies[0].low / proxies[1].low, proxies[1].low / proxies[0].low,
                                 proxies[0].high / proxies[1].high, proxies[1].high / proxies[0].high});
  o.require(drift < 1.5, "H1 proxy [" + fmt("%.3f", proxies[0].low) + ", " + fmt("%.3f", proxies[0].high) + "] -> [" +
                             fmt("%.3f", proxies[1].low) + ", " + fmt("%.3f", proxies[1].high) + "], drift x" +
                             fmt("%.3f", drift) + " < 1.5");
  return o;
}

// --- 9 -----------------------------------------------------------------------

Outcome exterior_criterion() {
  Outcome o;
  const double radius = 0.1, kappa = 5.0;
  PartialWaveConfig pw;
  pw.radius = radius;
  pw.kappa = kappa;
  const Vector3 theta = Vector3(1, 2, 2) / 3.0;
  const double optical = optical_theorem_check(mie_far_field(pw, theta, with_direction(gauss_product_quadrature(30, 60), theta)), kappa);
  o.require(optical < 1e-4, "optical theorem defect " + g3(optical) + " < 1e-4 at kR=0.5");
  const auto sol = solve_multibody(sphere_scene({Point3::Zero()}, radius, 5, kappa, Vector3::UnitZ()));
  const auto dirs = icosphere_directions(4);
  const double dev = sup_deviation(far_field_of_densities(sol, dirs), mie_far_field(pw, Vector3::UnitZ(), dirs));
  o.require(sol.panels.size() == 500 && dev < 1e-3,
            "BEM (" + std::to_string(sol.panels.size()) + " panels) vs series " + g3(dev) + " < 1e-3");
  return o;
}

struct Criterion {
  int id;
  const char* name;
  double budget_seconds;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--out" && i + 1 < argc) out_dir = argv[++i];
    else selected.insert(std::stoi(arg));
  }
  fs::create_directories(out_dir);

  const std::vector<Criterion> criteria = {
      {1, "capacitance", 30, capacitance_criterion},
      {2, "foldy-lax correctness", 60, foldy_lax_criterion},
      {3, "foldy-lax vs boundary elements", 600, bem_criterion},
      {4, "regime s<1", 300, [] { return sweep_criterion("sub_one", true); }},
      {5, "regime s=1", 1200, [] { return sweep_criterion("one", true); }},
      {6, "semiclassical estimates", 900, semiclassical_criterion},
      {7, "regime s>1", 1200, [] { return sweep_criterion("super_one", false); }},
      {8, "spectral correspondence", 600, spectral_criterion},
      {9, "exterior reference", 300, exterior_criterion},
      {10, "determinism", 0, determinism_criterion},
  };

  int failed = 0;
  for (const auto& c : criteria) {
    if (!selected.empty() && !selected.count(c.id)) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("error: ") + e.what();
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::string timing = fmt("%.1f s", seconds);
    if (c.budget_seconds > 0) {
      const bool in_time = seconds < c.budget_seconds;
      o.pass = o.pass && in_time;
      timing += fmt(" < %.0f s", c.budget_seconds) + (in_time ? "" : " [miss]");
    }
    failed += !o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << c.id << " (" << c.name << "): " << o.detail << "; "
              << timing << std::endl;
  }
  std::cout << (failed ? std::to_string(failed) + " criteria failed" : std::string("all criteria passed")) << std::endl;
  return failed ? 1 : 0;
}
