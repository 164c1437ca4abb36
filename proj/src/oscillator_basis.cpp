#include "sslab/oscillator_basis.hpp"

#include <cmath>
#include <numbers>

#include "sslab/errors.hpp"

namespace sslab {

void eval_basis(double y, std::span<double> out) {
  if (out.empty()) return;
  if (!std::isfinite(y)) throw StabilityError("eval_basis: non-finite coordinate", 0);

  constexpr int kRescaleBits = 600;
  const double kBig = std::ldexp(1.0, kRescaleBits);
  const double kSmall = std::ldexp(1.0, -kRescaleBits);

  // psi_n = mantissa * exp(log_scale)
  double log_scale = -0.5 * y * y - 0.25 * std::log(std::numbers::pi);
  double prev = 0.0;
  double cur = 1.0;
  out[0] = std::exp(log_scale);
  const double sqrt2y = std::numbers::sqrt2 * y;
  for (std::size_t n = 0; n + 1 < out.size(); ++n) {
    const double next =
        (sqrt2y * cur - std::sqrt(static_cast<double>(n)) * prev) / std::sqrt(static_cast<double>(n + 1));
    prev = cur;
    cur = next;
    if (std::abs(cur) > kBig) {
      cur *= kSmall;
      prev *= kSmall;
      log_scale += kRescaleBits * std::numbers::ln2;
    }
    const double value = cur * std::exp(log_scale);
    if (!std::isfinite(value)) throw StabilityError("eval_basis: recurrence overflow", static_cast<long>(n + 1));
    out[n + 1] = value;
  }
}

std::vector<double> eval_basis(double y, std::size_t N) {
  std::vector<double> out(N + 1);
  eval_basis(y, out);
  return out;
}

HermitePoint hermite_point(double y, std::size_t N) { return {y, eval_basis(y, N)}; }

double position_element(BasisIndex m, BasisIndex n) noexcept {
  if (m.n == n.n + 1) return std::sqrt(static_cast<double>(n.n + 1)) / std::numbers::sqrt2;
  if (n.n == m.n + 1) return std::sqrt(static_cast<double>(n.n)) / std::numbers::sqrt2;
  return 0.0;
}

}  // namespace sslab
