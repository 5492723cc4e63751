#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>

#include "doctest.h"
#include "foldylab/newtonian_spectrum.hpp"
#include "oracles.hpp"

using namespace foldylab;

namespace {

struct Level {
  NewtonianOperator op;
  SpectralDecomposition dec;
};

// Shared coarse levels; the dense eigensolve is the slow part.
const Level& level(double spacing) {
  static std::vector<std::pair<double, Level>> cache;
  for (const auto& [h, l] : cache) {
    if (h == spacing) return l;
  }
  Level l;
  l.op = assemble_R0(DomainSpec::ball(1.0), 1.0, spacing);
  l.dec = eigendecompose(l.op);
  cache.emplace_back(spacing, std::move(l));
  return cache.back().second;
}

const BoundaryOperatorPair& sphere_pair() {
  static const BoundaryOperatorPair pair = boundary_operators(make_icosphere(8));
  return pair;
}

}  // namespace

TEST_SUITE("newtonian_spectrum") {
  TEST_CASE("potential of the unit ball at the centre") {
    const auto op = assemble_R0(DomainSpec::ball(1.0), 1.0, 0.1);
    const RealVector u = op.apply(RealVector::Ones(static_cast<Eigen::Index>(op.size())));
    std::size_t centre = 0;
    for (std::size_t j = 0; j < op.size(); ++j) {
      if (op.grid.center(op.cells[j]).norm() < op.grid.center(op.cells[centre]).norm()) centre = j;
    }
    const double r = op.grid.center(op.cells[centre]).norm();
    CHECK(std::abs(u[centre] - (0.5 - r * r / 6.0)) < 0.02 * 0.5);
    CHECK((op.symmetric - op.symmetric.transpose()).cwiseAbs().maxCoeff() == 0.0);
  }

  TEST_CASE("eigenvalues against the ball spectrum") {
    const auto& l = level(0.2);
    const auto& lam = l.dec.eigenvalues;
    CHECK(l.dec.dropped == 0);
    CHECK(lam.minCoeff() > 0.0);
    for (Eigen::Index n = 1; n < lam.size(); ++n) CHECK(lam[n] <= lam[n - 1]);
    CHECK(orthonormality_defect(l.op, l.dec) < 1e-8);
    CHECK(lam[0] == doctest::Approx(oracle::newtonian_ball_eigenvalue(0, 1)).epsilon(0.01));
    CHECK(oracle::newtonian_ball_eigenvalue(0, 1) == doctest::Approx(4.0 / (pi * pi)).epsilon(1e-12));
    for (int n = 1; n <= 3; ++n) CHECK(lam[n] == doctest::Approx(oracle::newtonian_ball_eigenvalue(1, 1)).epsilon(0.02));
    for (int n = 4; n <= 8; ++n) CHECK(lam[n] == doctest::Approx(oracle::newtonian_ball_eigenvalue(2, 1)).epsilon(0.05));
    CHECK(lam[9] == doctest::Approx(oracle::newtonian_ball_eigenvalue(0, 2)).epsilon(0.05));
    // the largest eigenvalue improves under refinement
    const double exact = oracle::newtonian_ball_eigenvalue(0, 1);
    CHECK(std::abs(level(0.15).dec.eigenvalues[0] - exact) < std::abs(lam[0] - exact));
  }

  TEST_CASE("trace and scaling in V0") {
    const auto& l = level(0.2);
    CHECK(l.dec.eigenvalues.sum() == doctest::Approx(l.op.symmetric.trace()).epsilon(1e-10));
    const auto op2 = assemble_R0(DomainSpec::ball(1.0), 2.0, 0.2);
    const auto dec2 = eigendecompose(op2);
    CHECK((dec2.eigenvalues - 2.0 * l.dec.eigenvalues).cwiseAbs().maxCoeff() < 1e-12 * dec2.eigenvalues[0]);
  }

  TEST_CASE("eigenvectors reproduce themselves through the potential") {
    const auto& l = level(0.2);
    for (Eigen::Index n : {0, 1, 4}) {
      const RealVector e = l.dec.eigenvectors.col(n);
      const RealVector re = l.op.apply(e) / l.dec.eigenvalues[n];
      CHECK((re - e).norm() < 1e-9 * e.norm());
      std::vector<Point3> pts;
      for (std::size_t j = 0; j < l.op.size(); ++j) pts.push_back(l.op.grid.center(l.op.cells[j]));
      const RealVector ev = evaluate_mode(l.op, e, l.dec.eigenvalues[n], pts);
      CHECK((ev - e).norm() < 1e-9 * e.norm());
    }
  }

  TEST_CASE("boundary operators on the unit sphere") {
    const auto& pair = sphere_pair();
    const auto n = static_cast<Eigen::Index>(pair.panels.size());
    const RealVector ones = RealVector::Ones(n);
    const RealVector k1 = pair.K * ones;
    const RealVector s1 = pair.S * ones;
    CHECK((k1.array() + 0.5).abs().maxCoeff() < 0.01);
    CHECK((s1.array() - 1.0).abs().maxCoeff() < 0.02);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (pair.S + pair.S.transpose()));
    CHECK(es.eigenvalues().minCoeff() > 0.0);
    // K 1 = -1/2 and S 1 = 1 give S^{-1}(-1/2 I + K) 1 = -1
    const RealVector b1 = pair.robin_operator() * ones;
    CHECK((b1.array() + 1.0).abs().maxCoeff() < 0.05);
  }

  TEST_CASE("Robin correspondence of the leading modes") {
    const auto& coarse = level(0.2);
    const auto& fine = level(0.15);
    const auto& pair = sphere_pair();
    const auto r0 = robin_correspondence_residual(coarse.op, coarse.dec, pair, 0);
    const auto r1 = robin_correspondence_residual(fine.op, fine.dec, pair, 0);
    CHECK(r1.interior < r0.interior);
    CHECK(r1.boundary < r0.boundary);
    CHECK(r0.interior < 0.2);
    CHECK(r0.boundary < 0.1);
    CHECK(r0.rayleigh_lambda == doctest::Approx(coarse.dec.eigenvalues[0]).epsilon(0.05));
    CHECK(r1.rayleigh_lambda == doctest::Approx(fine.dec.eigenvalues[0]).epsilon(0.05));

    std::mt19937 rng(3);
    std::normal_distribution<double> g;
    RealVector noise(static_cast<Eigen::Index>(coarse.op.size()));
    for (auto& x : noise) x = g(rng);
    const auto bad = robin_residual_of(coarse.op, noise, coarse.dec.eigenvalues[0], pair);
    CHECK(bad.interior > 10.0 * r0.interior);
  }

  TEST_CASE("H1 proxy interval") {
    const auto& coarse = level(0.2);
    const auto& fine = level(0.15);
    const auto a = h1_proxy_interval(coarse.op, coarse.dec);
    const auto b = h1_proxy_interval(coarse.op, coarse.dec);
    CHECK(a.ratios == b.ratios);
    CHECK(a.ratios.size() == 20);
    CHECK(a.low > 0.0);
    CHECK(a.low <= a.high);
    const auto c = h1_proxy_interval(fine.op, fine.dec);
    CHECK(c.high / a.high < 1.5);
    CHECK(a.high / c.high < 1.5);
    CHECK(c.low / a.low < 1.5);
    CHECK(a.low / c.low < 1.5);
  }

  TEST_CASE("argument checks") {
    const auto& l = level(0.2);
    const auto& pair = sphere_pair();
    CHECK_THROWS_AS(robin_correspondence_residual(l.op, l.dec, pair, l.dec.eigenvalues.size()), InvalidArgument);
    NewtonianOptions opt;
    opt.cell_cap = 100;
    CHECK_THROWS_AS(assemble_R0(DomainSpec::ball(1.0), 1.0, 0.2, opt), InvalidArgument);
    CHECK_THROWS_AS(assemble_R0(DomainSpec::ball(1.0), 0.0, 0.2), InvalidArgument);
    auto dec = l.dec;
    dec.eigenvalues[1] = 1e-6 * dec.eigenvalues[0];
    CHECK_THROWS_AS(robin_correspondence_residual(l.op, dec, pair, 1), InvalidArgument);
  }
}
