#include "sslab/tridiagonal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "sslab/errors.hpp"

namespace sslab {

namespace {

double pivot_floor(const SymTridiagonal& m) {
  double emax = 1.0;
  for (double e : m.off) emax = std::max(emax, e * e);
  return std::numeric_limits<double>::min() * emax;
}

}  // namespace

std::pair<double, double> gershgorin_bounds(const SymTridiagonal& m) {
  const std::size_t n = m.size();
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (std::size_t i = 0; i < n; ++i) {
    double r = 0.0;
    if (i > 0) r += std::abs(m.off[i - 1]);
    if (i + 1 < n) r += std::abs(m.off[i]);
    lo = std::min(lo, m.diag[i] - r);
    hi = std::max(hi, m.diag[i] + r);
  }
  return {lo, hi};
}

std::size_t count_below(const SymTridiagonal& m, double shift) {
  const std::size_t n = m.size();
  const double pivmin = pivot_floor(m);
  std::size_t negatives = 0;
  double q = m.diag[0] - shift;
  for (std::size_t i = 0;;) {
    if (std::abs(q) < pivmin) q = -pivmin;
    if (q < 0.0) ++negatives;
    if (++i == n) break;
    q = m.diag[i] - shift - m.off[i - 1] * m.off[i - 1] / q;
  }
  return negatives;
}

double kth_eigenvalue(const SymTridiagonal& m, std::size_t k, double abs_tol) {
  if (k >= m.size()) throw DomainError("kth_eigenvalue: index exceeds matrix size");
  auto [lo, hi] = gershgorin_bounds(m);
  const double span = std::max(std::abs(lo), std::abs(hi));
  lo -= 1e-12 * span + pivot_floor(m);
  hi += 1e-12 * span + pivot_floor(m);
  constexpr double eps = std::numeric_limits<double>::epsilon();
  while (hi - lo > abs_tol + 2.0 * eps * std::max(std::abs(lo), std::abs(hi))) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (count_below(m, mid) > k)
      hi = mid;
    else
      lo = mid;
  }
  return 0.5 * (lo + hi);
}

std::vector<double> lowest_eigenvalues(const SymTridiagonal& m, std::size_t count, double abs_tol) {
  count = std::min(count, m.size());
  std::vector<double> out;
  out.reserve(count);
  for (std::size_t k = 0; k < count; ++k) out.push_back(kth_eigenvalue(m, k, abs_tol));
  return out;
}

std::vector<double> eigenvector(const SymTridiagonal& m, double shift, int iterations) {
  const std::size_t n = m.size();
  const auto [glo, ghi] = gershgorin_bounds(m);
  // Perturb the shift off the exact eigenvalue so the solve stays regular.
  const double nudge = 1e-14 * std::max({1.0, std::abs(glo), std::abs(ghi)});
  std::vector<double> d(n);
  for (std::size_t i = 0; i < n; ++i) d[i] = m.diag[i] - (shift + nudge);

  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = 1.0 + 0.1 * std::sin(1.0 + 0.7 * static_cast<double>(i));
  for (int it = 0; it < iterations; ++it) {
    v = solve_tridiagonal<double>(m.off, d, m.off, v);
    const double norm = std::sqrt(std::inner_product(v.begin(), v.end(), v.begin(), 0.0));
    if (!std::isfinite(norm) || norm == 0.0)
      throw StabilityError("eigenvector: inverse iteration broke down", it);
    for (double& x : v) x /= norm;
  }
  const auto big = std::max_element(v.begin(), v.end(),
                                    [](double a, double b) { return std::abs(a) < std::abs(b); });
  if (*big < 0.0)
    for (double& x : v) x = -x;
  return v;
}

template <class T>
std::vector<T> solve_tridiagonal(std::span<const T> sub, std::span<const T> diag,
                                 std::span<const T> super, std::span<const T> rhs) {
  const std::size_t n = diag.size();
  if (n == 0) return {};
  std::vector<T> dl(sub.begin(), sub.end());
  std::vector<T> d(diag.begin(), diag.end());
  std::vector<T> du(super.begin(), super.end());
  std::vector<T> du2(n > 2 ? n - 2 : 0, T{});
  std::vector<T> b(rhs.begin(), rhs.end());

  // Gaussian elimination with row interchanges; du2 holds the fill-in.
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (std::abs(d[i]) >= std::abs(dl[i])) {
      if (d[i] == T{}) throw DomainError("solve_tridiagonal: singular matrix");
      const T f = dl[i] / d[i];
      d[i + 1] -= f * du[i];
      b[i + 1] -= f * b[i];
      dl[i] = T{};
    } else {
      const T f = d[i] / dl[i];
      d[i] = dl[i];
      T tmp = d[i + 1];
      d[i + 1] = du[i] - f * tmp;
      du[i] = tmp;
      if (i + 2 < n) {
        du2[i] = du[i + 1];
        du[i + 1] = -f * du[i + 1];
      }
      std::swap(b[i], b[i + 1]);
      b[i + 1] -= f * b[i];
    }
  }
  if (d[n - 1] == T{}) throw DomainError("solve_tridiagonal: singular matrix");

  b[n - 1] /= d[n - 1];
  if (n > 1) b[n - 2] = (b[n - 2] - du[n - 2] * b[n - 1]) / d[n - 2];
  if (n > 2)
    for (std::size_t i = n - 2; i-- > 0;) b[i] = (b[i] - du[i] * b[i + 1] - du2[i] * b[i + 2]) / d[i];
  return b;
}

template std::vector<double> solve_tridiagonal<double>(std::span<const double>,
                                                       std::span<const double>,
                                                       std::span<const double>,
                                                       std::span<const double>);
template std::vector<std::complex<double>> solve_tridiagonal<std::complex<double>>(
    std::span<const std::complex<double>>, std::span<const std::complex<double>>,
    std::span<const std::complex<double>>, std::span<const std::complex<double>>);

}  // namespace sslab
