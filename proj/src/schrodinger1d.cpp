#include "sslab/schrodinger1d.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "sslab/errors.hpp"
#include "sslab/tridiagonal.hpp"

namespace sslab {

const char* to_string(Boundary b) noexcept { return b == Boundary::Dirichlet ? "dirichlet" : "neumann"; }

const char* to_string(Regime r) noexcept {
  switch (r) {
    case Regime::Subcritical: return "subcritical";
    case Regime::Critical: return "critical";
    case Regime::Supercritical: return "supercritical";
  }
  return "?";
}

std::vector<double> raw_eigenvalues_1d(const Problem1D& problem, double h, std::size_t count) {
  if (!(h > 0.0) || !(problem.half_width > 0.0)) throw DomainError("1D problem needs h > 0 and a positive box");
  if (count < 1) throw DomainError("eigenvalues_1d needs count >= 1");
  if (problem.whole_line && problem.boundary != Boundary::Dirichlet)
    throw DomainError("whole-line problems are truncated with Dirichlet ends");

  const double L = problem.half_width;
  const auto cells = static_cast<std::size_t>(std::max(4.0, std::round(2.0 * L / h)));
  const double step = 2.0 * L / static_cast<double>(cells);
  const double inv_h2 = 1.0 / (step * step);

  SymTridiagonal m;
  if (problem.boundary == Boundary::Dirichlet) {
    const std::size_t n = cells - 1;
    m.diag.resize(n);
    for (std::size_t i = 0; i < n; ++i)
      m.diag[i] = 2.0 * inv_h2 + problem.potential(-L + step * static_cast<double>(i + 1));
    m.off.assign(n - 1, -inv_h2);
  } else {
    const std::size_t n = cells;
    m.diag.resize(n);
    for (std::size_t i = 0; i < n; ++i)
      m.diag[i] = 2.0 * inv_h2 + problem.potential(-L + step * (static_cast<double>(i) + 0.5));
    m.diag.front() -= inv_h2;
    m.diag.back() -= inv_h2;
    m.off.assign(n - 1, -inv_h2);
  }
  return lowest_eigenvalues(m, count, 1e-15 * inv_h2);
}

Eigen1D eigenvalues_1d(const Problem1D& problem, std::size_t count) {
  const std::vector<double> e1 = raw_eigenvalues_1d(problem, problem.h, count);
  const std::vector<double> e2 = raw_eigenvalues_1d(problem, problem.h / 2.0, count);
  const std::vector<double> e4 = raw_eigenvalues_1d(problem, problem.h / 4.0, count);

  Eigen1D out;
  out.values.resize(count);
  out.errors.resize(count);
  for (std::size_t j = 0; j < count; ++j) {
    const double r1 = (4.0 * e2[j] - e1[j]) / 3.0;
    const double r2 = (4.0 * e4[j] - e2[j]) / 3.0;
    out.values[j] = r2;
    out.errors[j] = std::abs(r2 - r1);
    const double d12 = e1[j] - e2[j];
    const double d24 = e2[j] - e4[j];
    // eigensolver noise scales like 1e-15 / h^2 on the finest grid
    const double floor = 1e-12 * std::max(1.0, std::abs(e4[j])) + 1e-13 * 16.0 / (problem.h * problem.h);
    if (std::abs(d12) > floor && std::abs(d24) > floor) {
      const double order = std::log2(d12 / d24);
      if (!(order >= 1.5 && order <= 2.5)) {
        out.extrapolated = false;
        out.warning = "observed order " + std::to_string(order) + " for eigenvalue " + std::to_string(j) +
                      "; returning raw finest-grid values";
      }
    }
  }
  if (!out.extrapolated) {
    for (std::size_t j = 0; j < count; ++j) {
      out.values[j] = e4[j];
      out.errors[j] = std::abs(e4[j] - e2[j]);
    }
  }
  return out;
}

double anharmonic_box(double p, double decay_exponent) {
  if (!(p >= 1.0)) throw DomainError("anharmonic oscillator needs p >= 1");
  const double q = 0.5 * (p + 2.0);
  return std::max(1.2, std::pow(decay_exponent * q, 1.0 / q));
}

namespace {

Eigen1D refine_until(Problem1D problem, double tol) {
  const double h_min = problem.half_width / 40000.0;
  Eigen1D best = eigenvalues_1d(problem, 1);
  while ((!(best.errors[0] < tol) || !best.extrapolated) && problem.h / 2.0 >= h_min) {
    problem.h /= 2.0;
    best = eigenvalues_1d(problem, 1);
  }
  return best;
}

}  // namespace

GammaValue gamma_p(double p, double tol) {
  const double T = anharmonic_box(p);
  Problem1D problem{[p](double t) { return std::pow(std::abs(t), p); }, T, true, Boundary::Dirichlet, T / 100.0};
  const Eigen1D e = refine_until(problem, tol);
  return {p, e.values[0], e.errors[0]};
}

GammaValue gamma_minimum(double p_lo, double p_hi, double p_tol) {
  if (!(p_lo >= 1.0) || !(p_hi > p_lo)) throw DomainError("gamma_minimum needs 1 <= p_lo < p_hi");
  const double ratio = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = p_lo, b = p_hi;
  double c = b - ratio * (b - a), d = a + ratio * (b - a);
  GammaValue fc = gamma_p(c, 1e-10), fd = gamma_p(d, 1e-10);
  while (b - a > p_tol) {
    if (fc.gamma < fd.gamma) {
      b = d;
      d = c;
      fd = fc;
      c = b - ratio * (b - a);
      fc = gamma_p(c, 1e-10);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + ratio * (b - a);
      fd = gamma_p(d, 1e-10);
    }
  }
  return fc.gamma < fd.gamma ? fc : fd;
}

double neumann_cut_ground(double p, double k, double tol) {
  if (!(k > 0.0)) throw DomainError("neumann_cut_ground needs k > 0");
  if (!(p >= 1.0)) throw DomainError("anharmonic oscillator needs p >= 1");
  Problem1D problem{[p](double t) { return std::pow(std::abs(t), p); }, k, false, Boundary::Neumann,
                    std::min(k / 50.0, 0.05)};
  return refine_until(problem, tol).values[0];
}

ComparisonPotential mollified_well(double a, double ramp) {
  if (!(a > 0.0) || !(ramp > 0.0) || !(ramp < a)) throw DomainError("mollified_well needs 0 < ramp < a");
  return {[a, ramp](double x) {
            const double d = std::abs(x);
            if (d <= a - ramp) return 1.0;
            if (d >= a + ramp) return 0.0;
            return (a + ramp - d) / (2.0 * ramp);
          },
          a + ramp};
}

void validate_comparison(const ComparisonPotential& V) {
  const double a = V.support;
  if (!(a > 0.0)) throw DomainError("comparison potential needs a positive support half-width");
  const double span = a + 1.0;
  const double d1 = 1e-3 * a;
  const double d2 = d1 / 8.0;
  double slope1 = 0.0, slope2 = 0.0;
  for (double x = -span; x <= span; x += d2) {
    const double v = V.profile(x);
    if (!std::isfinite(v) || v < 0.0) throw DomainError("comparison potential must be finite and nonnegative");
    if (std::abs(x) > a && v != 0.0) throw DomainError("comparison potential nonzero outside its support");
    slope2 = std::max(slope2, std::abs(V.profile(x + d2) - v) / d2);
    slope1 = std::max(slope1, std::abs(V.profile(x + d1) - v) / d1);
  }
  if (slope2 > 4.0 * slope1 && slope2 > 1e3) throw DomainError("comparison potential has an unbounded derivative");
}

double comparison_threshold(const ComparisonPotential& V, double omega, double lambda) {
  if (!(omega > 0.0)) throw DomainError("comparison operator needs omega > 0");
  const double a = V.support;
  const double T = a + 40.0 / omega;
  const double w2 = omega * omega;
  Problem1D problem{[&](double x) { return w2 - lambda * V.profile(x); }, T, true, Boundary::Dirichlet,
                    std::min(a / 100.0, 0.01)};
  return eigenvalues_1d(problem, 1).values[0];
}

Classification classify_comparison(const ComparisonPotential& V, double omega, double lambda, double tol) {
  validate_comparison(V);
  Classification c;
  // essential spectrum starts at omega^2; the box only resolves what lies below it
  c.inf_sigma = std::min(omega * omega, comparison_threshold(V, omega, lambda));
  const double band = 1e-9 * omega * omega;
  c.regime = c.inf_sigma > band ? Regime::Subcritical : (c.inf_sigma < -band ? Regime::Supercritical : Regime::Critical);

  double lo = 0.0;
  double hi = std::max(1.0, omega * omega);
  while (comparison_threshold(V, omega, hi) > 0.0) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e12) throw ConvergenceError("classify_comparison: no sign change of inf sigma(L)");
  }
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (comparison_threshold(V, omega, mid) > 0.0)
      lo = mid;
    else
      hi = mid;
  }
  c.lambda_crit = 0.5 * (lo + hi);
  return c;
}

}  // namespace sslab
