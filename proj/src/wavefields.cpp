#include "sslab/wavefields.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "sslab/errors.hpp"
#include "sslab/oscillator_basis.hpp"

namespace sslab {

namespace {

constexpr double kDecayCutoff = 40.0;
constexpr double kZeroBand = 1e-8;
constexpr double kNoiseFloor = 1e-10;

std::size_t node_count(double lo, double hi, double step) {
  if (!(step > 0.0) || !(hi >= lo)) throw DomainError("grid needs step > 0 and max >= min");
  return static_cast<std::size_t>(std::llround((hi - lo) / step)) + 1;
}

double kappa(const ModeExpansion& mode, std::size_t n) {
  return std::sqrt(static_cast<double>(n) + 0.5 - mode.eps);
}

// Last coefficient that still matters at double precision.
std::size_t effective_size(const std::vector<double>& c) {
  double cmax = 0.0;
  for (double v : c) cmax = std::max(cmax, std::abs(v));
  std::size_t n = c.size();
  while (n > 1 && std::abs(c[n - 1]) < 1e-16 * cmax) --n;
  return n;
}

}  // namespace

std::size_t GridSpec::nx() const { return node_count(x_min, x_max, step); }
std::size_t GridSpec::ny() const { return node_count(y_min, y_max, step); }

ModeExpansion null_vector(const CouplingVariant& variant, double eps, std::size_t N, double tol) {
  const SymTridiagonal B = build_secular(variant, eps, N);
  std::vector<double> c = eigenvector(B, 0.0, 4);
  if (c[0] < 0.0)
    for (double& v : c) v = -v;

  double res2 = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    double r = B.diag[i] * c[i];
    if (i > 0) r += B.off[i - 1] * c[i - 1];
    if (i + 1 < c.size()) r += B.off[i] * c[i + 1];
    res2 += r * r;
  }
  const auto [glo, ghi] = gershgorin_bounds(B);
  const double norm_B = std::max(std::abs(glo), std::abs(ghi));
  const double residual = std::sqrt(res2);
  if (residual > 10.0 * tol * norm_B)
    throw ConsistencyError("null_vector: eps = " + std::to_string(eps) + " is not an eigenvalue (residual " +
                           std::to_string(residual) + ")");
  return {variant, eps, std::move(c), residual};
}

Field2D evaluate_field(const ModeExpansion& mode, const GridSpec& grid) {
  Field2D f;
  f.nx = grid.nx();
  f.ny = grid.ny();
  f.x_min = grid.x_min;
  f.y_min = grid.y_min;
  // last node; snapped to the requested end when the step divides the range
  const auto last = [&](double lo, double hi, std::size_t n) {
    const double end = lo + grid.step * static_cast<double>(n - 1);
    return std::abs(end - hi) <= 1e-9 * grid.step ? hi : end;
  };
  f.x_max = last(grid.x_min, grid.x_max, f.nx);
  f.y_max = last(grid.y_min, grid.y_max, f.ny);

  const std::size_t M = effective_size(mode.coefficients);
  const bool odd = mode.variant.kind == VariantKind::DeltaPrime;

  // Basis values (ny x M) and x-profiles (M x nx); the field is their product.
  Eigen::MatrixXd psi(f.ny, M);
  std::vector<double> row(M);
  for (std::size_t iy = 0; iy < f.ny; ++iy) {
    eval_basis(f.y(iy), row);
    for (std::size_t n = 0; n < M; ++n) psi(iy, n) = row[n];
  }
  Eigen::MatrixXd profile = Eigen::MatrixXd::Zero(M, f.nx);
  for (std::size_t ix = 0; ix < f.nx; ++ix) {
    const double x = f.x(ix);
    const double sign = odd ? (x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0)) : 1.0;
    for (std::size_t n = 0; n < M; ++n) {
      const double decay = kappa(mode, n) * std::abs(x);
      if (decay > kDecayCutoff) break;  // kappa_n increases with n
      profile(n, ix) = sign * mode.coefficients[n] * std::exp(-decay);
    }
  }
  const Eigen::MatrixXd values = psi * profile;
  f.values.resize(f.nx * f.ny);
  for (std::size_t iy = 0; iy < f.ny; ++iy)
    for (std::size_t ix = 0; ix < f.nx; ++ix) f.at(ix, iy) = values(iy, ix);

  // Resolution: decay length of the fastest significant mode in x, and the
  // oscillation scale of psi_{M-1} in y.
  double cmax = 0.0;
  for (double c : mode.coefficients) cmax = std::max(cmax, std::abs(c));
  std::size_t significant = 1;
  for (std::size_t n = 0; n < M; ++n)
    if (std::abs(mode.coefficients[n]) > 1e-10 * cmax) significant = n + 1;
  const double kmax = kappa(mode, significant - 1);
  const double local_wavelength = std::numbers::pi / std::sqrt(2.0 * static_cast<double>(significant));
  f.under_resolved = f.hx() * kmax > 1.0 || f.hy() > 0.5 * local_wavelength;
  return f;
}

double evaluate_point(const ModeExpansion& mode, double x, double y) {
  const std::size_t M = effective_size(mode.coefficients);
  const std::vector<double> psi = eval_basis(y, M - 1);
  const double sign = mode.variant.kind == VariantKind::DeltaPrime ? (x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0)) : 1.0;
  double sum = 0.0;
  for (std::size_t n = 0; n < M; ++n) {
    const double decay = kappa(mode, n) * std::abs(x);
    if (decay > kDecayCutoff) break;
    sum += mode.coefficients[n] * std::exp(-decay) * psi[n];
  }
  return sign * sum;
}

int sign_domains(const Field2D& field) {
  double fmax = 0.0;
  for (double v : field.values) fmax = std::max(fmax, std::abs(v));
  if (!(fmax >= kNoiseFloor)) throw DomainError("nodal count undefined: field below noise floor");
  const double band = kZeroBand * fmax;

  const std::size_t nx = field.nx, ny = field.ny;
  std::vector<int> sign(nx * ny);
  for (std::size_t i = 0; i < sign.size(); ++i)
    sign[i] = field.values[i] > band ? 1 : (field.values[i] < -band ? -1 : 0);

  std::vector<char> seen(nx * ny, 0);
  std::vector<std::size_t> stack;
  int domains = 0;
  for (std::size_t start = 0; start < sign.size(); ++start) {
    if (seen[start] || sign[start] == 0) continue;
    ++domains;
    const int s = sign[start];
    seen[start] = 1;
    stack.push_back(start);
    while (!stack.empty()) {
      const std::size_t k = stack.back();
      stack.pop_back();
      const std::size_t ix = k % nx, iy = k / nx;
      const auto visit = [&](std::size_t j) {
        if (!seen[j] && sign[j] == s) {
          seen[j] = 1;
          stack.push_back(j);
        }
      };
      if (ix > 0) visit(k - 1);
      if (ix + 1 < nx) visit(k + 1);
      if (iy > 0) visit(k - nx);
      if (iy + 1 < ny) visit(k + nx);
    }
  }
  return domains;
}

int nodal_count(const Field2D& field) { return sign_domains(field) - 1; }

}  // namespace sslab
