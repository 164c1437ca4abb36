#include "test_util.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <numbers>

#include "sslab/errors.hpp"
#include "sslab/oscillator_basis.hpp"

using namespace sslab;

namespace {

// Gauss-Hermite rule (weight e^{-y^2}) by Golub-Welsch.
struct Rule {
  Eigen::VectorXd nodes, weights;
};

Rule gauss_hermite(int n) {
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k < n; ++k) J(k, k - 1) = J(k - 1, k) = std::sqrt(k / 2.0);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  Rule r{es.eigenvalues(), Eigen::VectorXd(n)};
  // Christoffel form; eigenvector components lose the tiny edge weights.
  // Weights are returned already multiplied by e^{y^2}.
  for (int i = 0; i < n; ++i) {
    const double y = r.nodes(i);
    double prev = 0.0, cur = std::pow(std::numbers::pi, -0.25) * std::exp(-y * y / 2), sum = 0.0;
    for (int k = 0; k < n; ++k) {
      sum += cur * cur;
      const double next = std::sqrt(2.0 / (k + 1)) * y * cur - std::sqrt(double(k) / (k + 1)) * prev;
      prev = cur;
      cur = next;
    }
    r.weights(i) = 1.0 / sum;
  }
  return r;
}

}  // namespace

TEST_CASE("psi_0(0) = pi^{-1/4}") {
  CHECK_REL(eval_basis(0.0, 0)[0], std::pow(std::numbers::pi, -0.25), 1e-15);
  CHECK_REL(eval_basis(0.0, 0)[0], 0.7511, 1e-4);
}

TEST_CASE("psi_1(0) = 0 by parity") { CHECK(eval_basis(0.0, 1)[1] == 0.0); }

TEST_CASE("psi_2(1) against the closed form") {
  // (4y^2 - 2) e^{-y^2/2} / sqrt(2^2 2! sqrt(pi)) at y = 1, 30-digit reference
  CHECK_REL(eval_basis(1.0, 2)[2], 0.322144182556738, 1e-14);
}

TEST_CASE("hermite_point bundles the values") {
  const HermitePoint hp = hermite_point(0.3, 4);
  CHECK(hp.y == 0.3);
  REQUIRE(hp.values.size() == 5);
  CHECK(hp.values[3] == eval_basis(0.3, 4)[3]);
}

TEST_CASE("position elements") {
  CHECK_REL(position_element({0}, {1}), 1.0 / std::sqrt(2.0), 1e-15);
  CHECK(position_element({0}, {0}) == 0.0);
  CHECK_REL(position_element({3}, {2}), std::sqrt(3.0) / std::sqrt(2.0), 1e-15);
  CHECK(position_element({5}, {1}) == 0.0);
  for (std::size_t m = 0; m <= 60; ++m)
    for (std::size_t n = 0; n <= 60; ++n) CHECK(position_element({m}, {n}) == position_element({n}, {m}));
}

TEST_CASE("orthonormality and position elements by quadrature, N <= 50") {
  const int N = 50;
  const Rule r = gauss_hermite(90);  // exact for degree <= 179
  Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(N + 1, N + 1), pos = gram;
  for (int i = 0; i < r.nodes.size(); ++i) {
    const double y = r.nodes(i);
    const std::vector<double> psi = eval_basis(y, N);
    const double w = r.weights(i);
    for (int m = 0; m <= N; ++m)
      for (int n = 0; n <= N; ++n) {
        gram(m, n) += w * psi[m] * psi[n];
        pos(m, n) += w * psi[m] * y * psi[n];
      }
  }
  double worst_gram = 0.0, worst_pos = 0.0;
  for (int m = 0; m <= N; ++m)
    for (int n = 0; n <= N; ++n) {
      worst_gram = std::max(worst_gram, std::abs(gram(m, n) - (m == n ? 1.0 : 0.0)));
      worst_pos = std::max(worst_pos, std::abs(pos(m, n) - position_element({std::size_t(m)}, {std::size_t(n)})));
    }
  CHECK(worst_gram < 1e-10);
  CHECK(worst_pos < 1e-10);
}

TEST_CASE("recurrence stays finite for |y| <= 40 and N = 1e4") {
  for (double y : {0.0, 1.5, 10.0, 25.0, 40.0, -40.0}) {
    const std::vector<double> v = eval_basis(y, 10000);
    bool finite = true;
    for (double x : v) finite = finite && std::isfinite(x);
    CHECK(finite);
  }
  // Far in the classically forbidden region the low levels underflow to 0
  // but the levels whose turning point is near y are O(1e-1).
  const std::vector<double> v = eval_basis(40.0, 10000);
  CHECK(v[0] == 0.0);
  double peak = 0.0;
  for (double x : v) peak = std::max(peak, std::abs(x));
  CHECK(peak > 1e-2);
  CHECK(peak < 1.0);
}

TEST_CASE("psi_n(0) for large even n against the factorial formula") {
  // psi_n(0) = (-1)^{n/2} pi^{-1/4} sqrt(n!) / (2^{n/2} (n/2)!)
  const std::vector<double> v = eval_basis(0.0, 10000);
  for (int n : {10, 100, 1000, 10000}) {
    const double log_abs = -0.25 * std::log(std::numbers::pi) + 0.5 * std::lgamma(n + 1.0) - 0.5 * n * std::log(2.0) -
                           std::lgamma(n / 2.0 + 1.0);
    const double exact = ((n / 2) % 2 ? -1.0 : 1.0) * std::exp(log_abs);
    CHECK_REL(v[n], exact, 1e-10);
  }
}

TEST_CASE("non-finite input raises a stability error naming the level") {
  try {
    eval_basis(std::numeric_limits<double>::quiet_NaN(), 3);
    FAIL("expected StabilityError");
  } catch (const StabilityError& e) {
    CHECK(e.index() == 0);
  }
}
