#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "doctest.h"
#include "foldylab/harness.hpp"

using namespace foldylab;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::size_t count(const std::string& text, const std::string& needle) {
  std::size_t n = 0;
  for (auto p = text.find(needle); p != std::string::npos; p = text.find(needle, p + 1)) ++n;
  return n;
}

RegimeConfig small_sub_one() {
  RegimeConfig c;
  c.s = 0.5;
  c.t_formula = "s/3";
  c.a_list = {0.01, 0.001, 0.0001};
  c.kappa = 1.0;
  c.seed = 11;
  c.direction_frequency = 2;
  return c;
}

std::string scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("foldylab_test_" + name);
  std::filesystem::remove_all(dir);
  return dir.string();
}

}  // namespace

TEST_SUITE("harness") {
  TEST_CASE("rate fits") {
    std::vector<std::pair<double, double>> exact, flat, noisy;
    std::mt19937 rng(5);
    std::normal_distribution<double> g;
    for (double a : {0.1, 0.05, 0.02, 0.01, 0.005}) {
      exact.emplace_back(a, 7.0 * std::sqrt(a));
      flat.emplace_back(a, 0.3);
    }
    for (int k = 0; k < 12; ++k) {
      const double a = 0.1 * std::pow(0.7, k);
      noisy.emplace_back(a, std::cbrt(a) * (1.0 + 0.05 * g(rng)));
    }
    const auto e = fit_rate(exact);
    CHECK(e.slope == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(e.intercept == doctest::Approx(std::log(7.0)).epsilon(1e-12));
    CHECK(e.r_squared == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(e.points == 5);
    CHECK(std::abs(fit_rate(flat).slope) < 1e-14);
    CHECK(std::abs(fit_rate(noisy).slope - 1.0 / 3.0) < 0.1);
    CHECK_THROWS_AS(fit_rate({{0.1, 1.0}, {0.05, 0.5}}), InvalidArgument);
    CHECK_THROWS_AS(fit_rate({{0.1, 1.0}, {0.05, 0.0}, {0.02, 0.1}}), InvalidArgument);
    CHECK_THROWS_AS(fit_rate({{0.1, 1.0}, {0.1, 0.5}, {0.02, 0.1}}), InvalidArgument);
  }

  TEST_CASE("formula evaluation") {
    CHECK(evaluate_formula("1-s", 0.5, 0.0) == 0.5);
    CHECK(evaluate_formula("min(1/3, 2-3*t)", 1.0, 0.6) == doctest::Approx(0.2));
    CHECK(evaluate_formula("max(1, 2, -3)", 0, 0) == 2.0);
    CHECK(evaluate_formula(" -(s + 2) * 3 ", 1.0, 0.0) == -9.0);
    CHECK(evaluate_formula("1e-2", 0, 0) == 0.01);
    CHECK_THROWS_AS(evaluate_formula("s +", 1.0, 0.0), InvalidArgument);
    CHECK_THROWS_AS(evaluate_formula("foo(1)", 1.0, 0.0), InvalidArgument);
    CHECK_THROWS_AS(evaluate_formula("t", 1.0, std::nan("")), InvalidArgument);
  }

  TEST_CASE("predicted exponent table") {
    const auto& sub = predicted_exponent(ErrorKind::sup_farfield);
    CHECK(sub.regime == Regime::sub_one);
    CHECK(evaluate_formula(sub.formula, 0.5, 0.5 / 3) == doctest::Approx(0.5));
    CHECK(evaluate_formula(predicted_exponent(ErrorKind::foldy_vs_ls).formula, 1.0, 1.0 / 3) == doctest::Approx(1.0 / 3));
    CHECK(evaluate_formula(predicted_exponent(ErrorKind::foldy_vs_ls).formula, 1.0, 0.6) == doctest::Approx(0.2));
    const auto& sup = predicted_exponent(ErrorKind::foldy_vs_dirichlet);
    CHECK(evaluate_formula(sup.formula, 1.1, 1.1 / 3) == doctest::Approx(0.025));
    CHECK(evaluate_formula(sup.alternate, 1.1, 1.1 / 3) == doctest::Approx(0.1));
    CHECK(evaluate_formula(predicted_exponent(ErrorKind::ls_vs_dirichlet).formula, 1.1, 0.0) == doctest::Approx(0.025));
    for (auto k : {ErrorKind::sup_farfield, ErrorKind::foldy_vs_ls, ErrorKind::ls_vs_dirichlet, ErrorKind::foldy_vs_dirichlet}) {
      CHECK(error_kind_from_string(to_string(k)) == k);
    }
    CHECK_THROWS_AS(error_kind_from_string("bogus"), InvalidArgument);
  }

  TEST_CASE("config parsing") {
    const auto c = Config::parse_string(
        "# sweep\n[domain]\nkind = cube\nsize = 0.5\n[cloud]\ns = 0.5 ; exponent\nt = s/3\na_list = 0.05, 0.03,0.02\n"
        "seed = 4\n[solver]\nkappa = 2\n[sweep]\nregime = sub_one\n");
    CHECK(c.get("domain.kind", "") == "cube");
    CHECK(c.get_double("cloud.s", 0) == 0.5);
    CHECK(c.get_list("cloud.a_list") == std::vector<double>{0.05, 0.03, 0.02});
    CHECK(c.get("missing", "x") == "x");
    const auto r = regime_config_from(c);
    CHECK(r.domain.kind == DomainKind::cube);
    CHECK(r.kappa == 2.0);
    CHECK(r.t() == doctest::Approx(0.5 / 3));
    CHECK(r.seed == 4);
    CHECK(regime_from_config(c) == Regime::sub_one);
    CHECK_THROWS_AS(Config::parse_string("[domain\n"), IoError);
    CHECK_THROWS_AS(Config::parse_string("novalue\n"), IoError);
    CHECK_THROWS_AS(Config::parse_string("x = abc").get_double("x", 0), IoError);
  }

  TEST_CASE("regime gating") {
    auto c = small_sub_one();
    c.s = 1.0;  // not a sub_one exponent
    try {
      run_regime(Regime::sub_one, c);
      FAIL("expected the conditions to fail");
    } catch (const InvalidArgument& e) {
      CHECK(std::string(e.what()).find("binding constraint") != std::string::npos);
    }
    c = small_sub_one();
    c.a_list = {0.05, 0.1};
    CHECK_THROWS_AS(run_regime(Regime::sub_one, c), InvalidArgument);
    c.a_list.clear();
    CHECK_THROWS_AS(run_regime(Regime::sub_one, c), InvalidArgument);
  }

  TEST_CASE("sub_one sweep rows") {
    const auto c = small_sub_one();
    const auto rows = run_regime(Regime::sub_one, c);
    REQUIRE(rows.size() == 3);
    for (const auto& r : rows) {
      CHECK(r.err > 0.0);
      CHECK(r.err_kind == ErrorKind::sup_farfield);
      CHECK(r.seed == 11);
      CHECK(r.t == doctest::Approx(0.5 / 3));
    }
    CHECK(rows[0].M < rows[2].M);
  }

  TEST_CASE("report emission") {
    const auto empty_dir = scratch("empty");
    const auto files = emit_report({}, empty_dir);
    CHECK(files.size() == 2);
    CHECK(slurp(empty_dir + "/sweep.csv") == "a,M,d,s,t,kappa,err,err_kind,seed\n");
    CHECK(count(slurp(empty_dir + "/rates.csv"), "\n") == 1);
    CHECK(slurp(empty_dir + "/rates.csv").rfind("regime,slope,predicted_exponent,within_tolerance", 0) == 0);

    std::vector<SweepRow> rows;
    for (double a : {0.05, 0.03, 0.02, 0.01}) {
      SweepRow r;
      r.a = a;
      r.M = static_cast<std::size_t>(1.0 / a);
      r.s = 0.5;
      r.t = 0.5 / 3;
      r.err = 2.0 * std::sqrt(a);
      rows.push_back(r);
    }
    const auto dir = scratch("four");
    const auto written = emit_report(rows, dir);
    CHECK(written.size() == 3);
    const std::string svg = slurp(dir + "/regime_sub_one.svg");
    CHECK(count(svg, "<circle") == 4);
    CHECK(!std::filesystem::exists(dir + "/regime_one.svg"));
    const auto rates = summarize_rates(rows);
    REQUIRE(rates.size() == 1);
    CHECK(rates[0].fit.slope == doctest::Approx(0.5));
    CHECK(rates[0].within_tolerance);
    CHECK(count(slurp(dir + "/sweep.csv"), "\n") == 5);
  }

  TEST_CASE("alternate exponent is flagged") {
    std::vector<SweepRow> rows;
    for (double a : {0.02, 0.01, 0.005}) {
      SweepRow r;
      r.a = a;
      r.s = 1.1;
      r.t = 1.1 / 3;
      r.err = std::pow(a, 0.1);
      r.err_kind = ErrorKind::foldy_vs_dirichlet;
      rows.push_back(r);
    }
    std::ostringstream out;
    write_rates_csv(out, summarize_rates(rows));
    CHECK(out.str().find("alternate exponent differs from predicted") != std::string::npos);
    CHECK(out.str().find("," + format_double(0.1) + ",") != std::string::npos);
  }

  TEST_CASE("sweeps are byte-identical on re-run") {
    const auto c = small_sub_one();
    const auto a = scratch("run_a");
    const auto b = scratch("run_b");
    emit_report(run_regime(Regime::sub_one, c), a);
    emit_report(run_regime(Regime::sub_one, c), b);
    for (const char* f : {"/sweep.csv", "/rates.csv", "/regime_sub_one.svg"}) CHECK(slurp(a + f) == slurp(b + f));
    auto other = c;
    other.mode = PlacementMode::jitter;
    other.t_formula = "s/2";  // leaves room to move inside a cell
    other.seed = 12;
    const auto x = scratch("run_x");
    const auto y = scratch("run_y");
    emit_report(run_regime(Regime::sub_one, other), x);
    emit_report(run_regime(Regime::sub_one, other), y);
    CHECK(slurp(x + "/sweep.csv") == slurp(y + "/sweep.csv"));
  }
}
