#include "test_util.hpp"

#include <cmath>
#include <numbers>

#include "sslab/errors.hpp"
#include "sslab/schrodinger1d.hpp"

using namespace sslab;

TEST_CASE("harmonic oscillator on the line") {
  Problem1D pb;
  pb.potential = [](double t) { return t * t; };
  pb.half_width = 10.0;
  pb.whole_line = true;
  pb.h = 0.02;
  const Eigen1D e = eigenvalues_1d(pb, 3);
  CHECK(e.extrapolated);
  CHECK_NEAR(e.values[0], 1.0, 1e-6);
  CHECK_NEAR(e.values[1], 3.0, 1e-6);
  CHECK_NEAR(e.values[2], 5.0, 1e-6);
  for (double err : e.errors) CHECK(err < 1e-6);
}

TEST_CASE("second-order convergence of the raw discretization") {
  Problem1D pb;
  pb.potential = [](double t) { return t * t; };
  pb.half_width = 10.0;
  pb.whole_line = true;
  const double e1 = raw_eigenvalues_1d(pb, 0.04, 1)[0] - 1.0;
  const double e2 = raw_eigenvalues_1d(pb, 0.02, 1)[0] - 1.0;
  CHECK_NEAR(std::log2(std::abs(e1 / e2)), 2.0, 0.05);
}

TEST_CASE("free Neumann box") {
  const double k = 1.5;
  Problem1D pb;
  pb.potential = [](double) { return 0.0; };
  pb.half_width = k;
  pb.boundary = Boundary::Neumann;
  pb.h = 0.01;
  const Eigen1D e = eigenvalues_1d(pb, 3);
  CHECK_NEAR(e.values[0], 0.0, 1e-9);
  CHECK_NEAR(e.values[1], std::pow(std::numbers::pi / (2 * k), 2), 1e-7);
  CHECK_NEAR(e.values[2], std::pow(std::numbers::pi / k, 2), 1e-7);
}

TEST_CASE("gamma_p anchors") {
  CHECK_NEAR(gamma_p(2.0).gamma, 1.0, 1e-6);
  CHECK_NEAR(gamma_p(1.788).gamma, 0.998995, 1e-4);
  SUBCASE("large p approaches pi^2/4 from below, increasing") {
    double prev = gamma_p(20.0).gamma;
    for (double p : {40.0, 70.0, 100.0}) {
      const double g = gamma_p(p).gamma;
      CHECK(g > prev);
      CHECK(g < std::numbers::pi * std::numbers::pi / 4.0);
      prev = g;
    }
    CHECK(prev > 2.0);
  }
  CHECK_THROWS_AS(gamma_p(0.5), DomainError);
}

TEST_CASE("gamma_p minimum") {
  const GammaValue m = gamma_minimum(1.5, 2.1);
  CHECK_NEAR(m.p, 1.788, 0.02);
  CHECK_NEAR(m.gamma, 0.998995, 2e-4);
}

TEST_CASE("gamma_p is continuous in p") {
  const auto max_jump = [](double step) {
    double jump = 0.0, prev = gamma_p(1.0, 1e-7).gamma;
    for (double p = 1.0 + step; p <= 20.0 + 1e-9; p += step) {
      const double g = gamma_p(p, 1e-7).gamma;
      jump = std::max(jump, std::abs(g - prev));
      prev = g;
    }
    return jump;
  };
  const double coarse = max_jump(1.0), fine = max_jump(0.5);
  CHECK(fine < 0.75 * coarse);
}

TEST_CASE("Neumann cut of the oscillator") {
  const double g2 = gamma_p(2.0).gamma;
  SUBCASE("approaches gamma_2 from below") {
    double prev = INFINITY;
    for (double k : {1.0, 2.0, 3.0, 4.0}) {
      const double v = neumann_cut_ground(2.0, k);
      CHECK(v < g2);
      CHECK(g2 - v < prev);
      prev = g2 - v;
    }
  }
  SUBCASE("k = 6 and k = 10 sit at the solver floor") {
    // the true gap is below 1e-12 here; what remains is discretization noise
    CHECK_NEAR(neumann_cut_ground(2.0, 6.0), g2, 1e-8);
    CHECK_NEAR(neumann_cut_ground(2.0, 10.0), g2, 1e-8);
  }
  SUBCASE("small box is dominated by the kinetic term") {
    const double v = neumann_cut_ground(2.0, 0.5);
    CHECK(v < g2);
    CHECK_NEAR(v, 0.5 * 0.5 / 3.0, 1e-2);  // <t^2> of the constant mode
  }
  SUBCASE("gap decays faster than k^{-p/2}") {
    double prev = INFINITY;
    for (double k : {2.0, 3.0, 4.0}) {
      const double scaled = (g2 - neumann_cut_ground(2.0, k)) * k;
      CHECK(scaled < prev);
      prev = scaled;
    }
  }
}

TEST_CASE("Dirichlet lies above Neumann") {
  for (double p : {1.0, 2.0, 4.0})
    for (double k : {0.5, 1.0, 2.0, 3.0}) {
      Problem1D pb;
      pb.potential = [p](double t) { return std::pow(std::abs(t), p); };
      pb.half_width = k;
      pb.h = k / 100.0;
      const double d = eigenvalues_1d(pb, 1).values[0];
      pb.boundary = Boundary::Neumann;
      const double n = eigenvalues_1d(pb, 1).values[0];
      CHECK(d >= n);
    }
}

TEST_CASE("comparison operator classification") {
  const ComparisonPotential well = mollified_well(1.0, 0.01);
  SUBCASE("zero coupling is subcritical with inf sigma = omega^2") {
    const Classification c = classify_comparison(well, 1.3, 0.0);
    CHECK(c.regime == Regime::Subcritical);
    CHECK_NEAR(c.inf_sigma, 1.69, 1e-6);
  }
  SUBCASE("square-well threshold") {
    // at E = 0 the well [-1, 1] with omega = 1 has k tan k = 1, lambda = 1 + k^2
    double lo = 0.1, hi = 1.5;
    for (int i = 0; i < 100; ++i) {
      const double mid = 0.5 * (lo + hi);
      (mid * std::tan(mid) < 1.0 ? lo : hi) = mid;
    }
    const double oracle = 1.0 + lo * lo;
    // the ramp shifts the threshold at second order in its width
    const Classification c = classify_comparison(well, 1.0, 1.0);
    CHECK_NEAR(c.lambda_crit, oracle, 1e-3);
    CHECK_NEAR(comparison_threshold(well, 1.0, oracle), 0.0, 1e-3);
    CHECK(c.regime == Regime::Subcritical);
    CHECK(classify_comparison(well, 1.0, 2.0).regime == Regime::Supercritical);
  }
  SUBCASE("doubling V halves lambda_crit") {
    ComparisonPotential twice{[well](double x) { return 2.0 * well.profile(x); }, well.support};
    const double a = classify_comparison(well, 1.0, 1.0).lambda_crit;
    const double b = classify_comparison(twice, 1.0, 1.0).lambda_crit;
    CHECK_NEAR(b, a / 2.0, 1e-5);
  }
  SUBCASE("inf sigma changes sign across lambda_crit") {
    const double lc = classify_comparison(well, 1.0, 1.0).lambda_crit;
    CHECK(classify_comparison(well, 1.0, lc - 1e-3).inf_sigma > 0.0);
    CHECK(classify_comparison(well, 1.0, lc + 1e-3).inf_sigma < 0.0);
  }
  SUBCASE("hypotheses are validated") {
    ComparisonPotential negative{[](double x) { return std::abs(x) < 1 ? -1.0 : 0.0; }, 1.0};
    CHECK_THROWS_AS(validate_comparison(negative), DomainError);
    ComparisonPotential jump{[](double x) { return std::abs(x) < 1 ? 1.0 : 0.0; }, 1.0};
    CHECK_THROWS_AS(validate_comparison(jump), DomainError);
    ComparisonPotential wide{[](double x) { return std::exp(-x * x); }, 1.0};
    CHECK_THROWS_AS(validate_comparison(wide), DomainError);
  }
}
