#include "test_util.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include "sslab/errors.hpp"
#include "sslab/secular.hpp"
#include "sslab/tridiagonal.hpp"

using namespace sslab;

TEST_CASE("build_secular, delta, N = 1") {
  const double lam = 0.8, eps = 0.2;
  const SymTridiagonal b = build_secular(CouplingVariant::delta(lam), eps, 1);
  REQUIRE(b.size() == 2);
  CHECK_REL(b.diag[0], std::sqrt(0.5 - eps), 1e-15);
  CHECK_REL(b.diag[1], std::sqrt(1.5 - eps), 1e-15);
  CHECK_REL(b.off[0], lam / (2.0 * std::numbers::sqrt2), 1e-15);
}

TEST_CASE("build_secular, zero coupling is diagonal and positive") {
  const SymTridiagonal b = build_secular(CouplingVariant::delta(0.0), 0.3, 20);
  for (double e : b.off) CHECK(e == 0.0);
  for (std::size_t n = 0; n < b.size(); ++n) CHECK(b.diag[n] == doctest::Approx(std::sqrt(n + 0.5 - 0.3)));
  CHECK(count_below(b, 0.0) == 0);
}

TEST_CASE("build_secular, delta-prime, N = 1") {
  const double beta = 3.0, eps = 0.1;
  const SymTridiagonal b = build_secular(CouplingVariant::delta_prime(beta), eps, 1);
  CHECK(b.diag[0] == doctest::Approx(beta * std::sqrt(0.5 - eps)));
  CHECK(b.diag[1] == doctest::Approx(beta * std::sqrt(1.5 - eps)));
  CHECK(b.off[0] == doctest::Approx(std::numbers::sqrt2));
}

TEST_CASE("build_secular rejects the continuum and bad couplings") {
  CHECK_THROWS_AS(build_secular(CouplingVariant::delta(1.0), 0.5, 4), DomainError);
  CHECK_THROWS_AS(build_secular(CouplingVariant::delta(1.0), 0.7, 4), DomainError);
  CHECK_THROWS_AS(CouplingVariant::delta(-0.1), DomainError);
  CHECK_THROWS_AS(CouplingVariant::delta_prime(0.0), DomainError);
  CHECK(kDeltaCritical == doctest::Approx(std::sqrt(2.0)));
  CHECK(kDeltaPrimeCritical == doctest::Approx(2.0 * std::sqrt(2.0)));
}

TEST_CASE("smallest_eigenvalue") {
  CHECK_REL(smallest_eigenvalue(CouplingVariant::delta(0.0), 0.0, 10), std::sqrt(0.5), 1e-14);

  SUBCASE("strictly decreasing in eps") {
    const auto v = CouplingVariant::delta(1.0);
    double prev = smallest_eigenvalue(v, -1.0, 200);
    for (double eps = -0.95; eps < 0.5; eps += 0.05) {
      const double cur = smallest_eigenvalue(v, eps, 200);
      CHECK(cur < prev);
      prev = cur;
    }
  }

  SUBCASE("unique root for lambda = 1, N = 2000, against a 1e-4 scan") {
    const auto v = CouplingVariant::delta(1.0);
    std::vector<double> crossings;
    double prev = smallest_eigenvalue(v, 1e-4, 2000);
    for (int k = 2; k < 5000; ++k) {
      const double eps = 1e-4 * k;
      const double cur = smallest_eigenvalue(v, eps, 2000);
      if ((prev > 0) != (cur > 0)) crossings.push_back(eps);
      prev = cur;
    }
    REQUIRE(crossings.size() == 1);
    const SpectralScan s = find_spectrum(v, 2000, 1e-12);
    REQUIRE(s.eigenvalues.size() == 1);
    CHECK(std::abs(s.eigenvalues[0] - crossings[0]) <= 1e-4);
    CHECK(std::abs(smallest_eigenvalue(v, s.eigenvalues[0], 2000)) < 1e-9);
  }
}

TEST_CASE("find_spectrum examples") {
  CHECK(find_spectrum(CouplingVariant::delta(1.0), 4000, 1e-12).eigenvalues.size() == 1);
  CHECK(find_spectrum(CouplingVariant::delta(1.39), 8000, 1e-12).eigenvalues.size() == 2);

  const SpectralScan dp = find_spectrum(CouplingVariant::delta_prime(10.0), 4000, 1e-14);
  REQUIRE(dp.eigenvalues.size() == 1);
  // 1/2 - 4/beta^4 + O(beta^-6): the correction is about 6% at beta = 10
  CHECK_REL(0.5 - dp.eigenvalues[0], 4e-4, 0.1);

  CHECK_THROWS_AS(find_spectrum(CouplingVariant::delta(1.0), 1, 1e-10), DomainError);
  CHECK_THROWS_AS(find_spectrum(CouplingVariant::delta(1.0), 100, 0.0), DomainError);
}

TEST_CASE("count_eigenvalues examples") {
  CHECK(count_eigenvalues(CouplingVariant::delta(0.5), 4000) == 1);
  // The fourth eigenvalue appears at 1.410138 > 1.41, so three exist here.
  for (std::size_t N : {2000, 8000, 32000}) CHECK(count_eigenvalues(CouplingVariant::delta(1.41), N) == 3);
  const double beta = kDeltaPrimeCritical * 1.05;
  CHECK(asymptotic_count(VariantKind::DeltaPrime, beta) == doctest::Approx(1.0 / (4.0 * std::sqrt(0.1))));
  CHECK(count_eigenvalues(CouplingVariant::delta_prime(beta), 8000) == 1);
}

TEST_CASE("coupling thresholds") {
  CHECK_REL(coupling_threshold(VariantKind::Delta, 2, 8000, 1e-8), 1.387559, 5e-4 / 1.387559);
  CHECK_REL(coupling_threshold(VariantKind::Delta, 3, 8000, 1e-8), 1.405798, 1e-5);
  CHECK_REL(coupling_threshold(VariantKind::Delta, 5, 8000, 1e-8), 1.41181626, 1e-5);

  SUBCASE("delta-prime thresholds are the delta ones mapped by beta = 4/lambda") {
    const double lam = coupling_threshold(VariantKind::Delta, 2, 4000, 1e-10);
    const double beta = coupling_threshold(VariantKind::DeltaPrime, 2, 4000, 1e-10);
    CHECK_REL(beta, 4.0 / lam, 1e-8);
  }
  CHECK_THROWS_AS(coupling_threshold(VariantKind::Delta, 1, 100, 1e-8), DomainError);
  CHECK_THROWS_AS(coupling_threshold(VariantKind::Delta, 40, 20, 1e-8), ThresholdNotFound);
}

TEST_CASE("power-law fit") {
  SUBCASE("exact power law is recovered to machine precision") {
    std::vector<double> x, y;
    for (double l = 0.05; l < 0.31; l += 0.025) {
      x.push_back(l);
      y.push_back(0.0123 * std::pow(l, 4));
    }
    const PowerLawFit f = fit_power_law(x, y);
    CHECK_REL(f.exponent, 4.0, 1e-12);
    CHECK_REL(f.coefficient, 0.0123, 1e-11);
  }
  SUBCASE("refuses degenerate input") {
    const std::vector<double> x{1.0, 1.0}, y{1.0, 2.0};
    CHECK_THROWS_AS(fit_power_law(x, y), DomainError);
    const std::vector<double> x2{1.0, 2.0}, y2{1.0, -2.0};
    CHECK_THROWS_AS(fit_power_law(x2, y2), DomainError);
  }
}

TEST_CASE("weak-coupling fit, delta") {
  std::vector<double> lam;
  for (int i = 0; i <= 10; ++i) lam.push_back(0.05 + 0.025 * i);
  const PowerLawFit f = weak_coupling_fit(VariantKind::Delta, lam);
  CHECK_REL(f.exponent, 4.0, 0.05 / 4.0);
  // The binding is (lambda^4/64)(1 + 0.353 lambda^2 + ...): a free two-parameter
  // fit over [0.05, 0.3] absorbs the correction into a ~4.5% coefficient bias.
  CHECK_REL(f.coefficient, 1.0 / 64.0, 0.06);
  // With the exponent fixed the leading coefficient is recovered.
  const GroundBinding g = converged_ground_binding(CouplingVariant::delta(0.05));
  CHECK_REL(g.binding / std::pow(0.05, 4), 1.0 / 64.0, 1.5e-3);
}

TEST_CASE("weak-coupling fit, delta-prime") {
  std::vector<double> beta;
  for (int i = 0; i <= 8; ++i) beta.push_back(8.0 + 2.0 * i);
  const PowerLawFit f = weak_coupling_fit(VariantKind::DeltaPrime, beta);
  CHECK_REL(f.exponent, -4.0, 0.1 / 4.0);
  const GroundBinding g = converged_ground_binding(CouplingVariant::delta_prime(100.0));
  CHECK_REL(g.binding * std::pow(100.0, 4), 4.0, 1e-3);
}

TEST_CASE("asymptotic count") {
  CHECK_REL(asymptotic_count(VariantKind::Delta, std::numbers::sqrt2 / 1.02), 1.25, 1e-12);
  CHECK_REL(asymptotic_count(VariantKind::DeltaPrime, kDeltaPrimeCritical * 1.08), 0.625, 1e-12);
  CHECK(std::isinf(asymptotic_count(VariantKind::Delta, std::numbers::sqrt2)));
  CHECK_THROWS_AS(asymptotic_count(VariantKind::Delta, 1.5), DomainError);
  CHECK_THROWS_AS(asymptotic_count(VariantKind::DeltaPrime, 2.0), DomainError);
  for (double n : {3.0, 5.0, 8.0}) {
    CHECK(asymptotic_count(VariantKind::Delta, coupling_for_count(VariantKind::Delta, n)) == doctest::Approx(n));
    CHECK(asymptotic_count(VariantKind::DeltaPrime, coupling_for_count(VariantKind::DeltaPrime, n)) ==
          doctest::Approx(n));
  }
}

TEST_CASE("property: spectral confinement and count agreement") {
  std::size_t prev_count = 0;
  for (double lam = 0.05; lam < std::numbers::sqrt2 - 0.001; lam += 0.0125) {
    const auto v = CouplingVariant::delta(lam);
    const SpectralScan s = find_spectrum(v, 4000, 1e-12);
    for (double e : s.eigenvalues) {
      CHECK(e < 0.5);
      CHECK(e > 0.0);
    }
    for (std::size_t i = 1; i < s.eigenvalues.size(); ++i) CHECK(s.eigenvalues[i - 1] < s.eigenvalues[i]);
    const std::size_t c = count_eigenvalues(v, 4000);
    CHECK(c == s.eigenvalues.size());
    CHECK(c >= prev_count);  // coupling monotonicity
    prev_count = c;
  }
  for (double beta = kDeltaPrimeCritical + 0.01; beta < 40.0; beta *= 1.3) {
    const SpectralScan s = find_spectrum(CouplingVariant::delta_prime(beta), 4000, 1e-12);
    for (double e : s.eigenvalues) CHECK(e < 0.5);
  }
}

TEST_CASE("property: every eigenvalue of B(eps) decreases in eps") {
  const auto v = CouplingVariant::delta(1.2);
  std::vector<double> prev = lowest_eigenvalues(build_secular(v, -0.5, 60), 5);
  for (double eps = -0.4; eps < 0.5; eps += 0.1) {
    const std::vector<double> cur = lowest_eigenvalues(build_secular(v, eps, 60), 5);
    for (std::size_t k = 0; k < 5; ++k) CHECK(cur[k] < prev[k]);
    prev = cur;
  }
}

TEST_CASE("property: truncation convergence at lambda = 1") {
  const auto v = CouplingVariant::delta(1.0);
  std::vector<double> e;
  for (std::size_t N : {2, 4, 8, 16, 32}) e.push_back(find_spectrum(v, N, 1e-15).eigenvalues.at(0));
  for (std::size_t i = 2; i < e.size(); ++i) CHECK(std::abs(e[i] - e[i - 1]) < std::abs(e[i - 1] - e[i - 2]));
  // By N = 250 the root is converged to rounding; the spec grid stays there.
  double prev_diff = INFINITY;
  for (std::size_t N : {250, 500, 1000, 2000}) {
    const double d = std::abs(find_spectrum(v, N, 1e-15).eigenvalues[0] - find_spectrum(v, 2 * N, 1e-15).eigenvalues[0]);
    CHECK(d <= prev_diff);
    CHECK(d < 1e-13);
    prev_diff = d;
  }
}

TEST_CASE("delta-prime tends to the free diagonal as beta grows") {
  for (double beta : {10.0, 100.0, 1000.0}) {
    const SymTridiagonal b = build_secular(CouplingVariant::delta_prime(beta), 0.2, 10);
    for (std::size_t n = 0; n < b.off.size(); ++n) CHECK(b.off[n] / beta <= std::sqrt(2.0 * (n + 1)) / beta);
    for (std::size_t n = 0; n < b.size(); ++n) CHECK(b.diag[n] / beta == doctest::Approx(std::sqrt(n + 0.3)));
  }
  double prev = 0.0;
  for (double beta : {5.0, 10.0, 20.0, 40.0}) {
    const double e1 = find_spectrum(CouplingVariant::delta_prime(beta), 4000, 1e-15).eigenvalues.at(0);
    CHECK(e1 > prev);
    prev = e1;
  }
  CHECK(0.5 - prev < 2e-6);
}

TEST_CASE("adaptive spectrum doubles until the gap is small") {
  const SpectralScan s = find_spectrum_adaptive(CouplingVariant::delta(1.4), 1e-12, 1e-9);
  CHECK(s.eigenvalues.size() == 2);
  CHECK(s.convergence_gap <= 1e-9);
  CHECK(s.N >= 500);
}
