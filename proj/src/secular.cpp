#include "sslab/secular.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "sslab/errors.hpp"
#include "sslab/oscillator_basis.hpp"

namespace sslab {

CouplingVariant CouplingVariant::delta(double lambda) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw DomainError("delta coupling must be finite and >= 0");
  return {VariantKind::Delta, lambda};
}

CouplingVariant CouplingVariant::delta_prime(double beta) {
  if (!(beta > 0.0) || !std::isfinite(beta)) throw DomainError("delta-prime coupling must be finite and > 0");
  return {VariantKind::DeltaPrime, beta};
}

bool CouplingVariant::subcritical() const noexcept {
  return kind == VariantKind::Delta ? coupling < kDeltaCritical : coupling > kDeltaPrimeCritical;
}

const char* to_string(VariantKind kind) noexcept {
  return kind == VariantKind::Delta ? "delta" : "delta-prime";
}

SecularSystem::SecularSystem(CouplingVariant variant, std::size_t N) : variant_(variant), N_(N) {
  if (N < 1) throw DomainError("secular system needs N >= 1");
  const double scale = variant.kind == VariantKind::Delta ? 0.5 * variant.coupling : 2.0;
  off_.resize(N);
  for (std::size_t n = 0; n < N; ++n) off_[n] = scale * position_element({n}, {n + 1});
}

SymTridiagonal SecularSystem::at_binding(double mu) const {
  if (!(mu > 0.0)) throw DomainError("secular matrix requires eps < 1/2 (binding " + std::to_string(mu) + ")");
  const double diag_scale = variant_.kind == VariantKind::Delta ? 1.0 : variant_.coupling;
  SymTridiagonal m;
  m.diag.resize(N_ + 1);
  for (std::size_t n = 0; n <= N_; ++n) m.diag[n] = diag_scale * std::sqrt(static_cast<double>(n) + mu);
  m.off = off_;
  return m;
}

SymTridiagonal SecularSystem::at_energy(double eps) const {
  if (!(eps < 0.5)) throw DomainError("secular matrix requires eps < 1/2 (got " + std::to_string(eps) + ")");
  return at_binding(0.5 - eps);
}

std::size_t SecularSystem::inertia(double mu) const { return count_below(at_binding(mu), 0.0); }

SymTridiagonal build_secular(const CouplingVariant& variant, double eps, std::size_t N) {
  return SecularSystem(variant, N).at_energy(eps);
}

double smallest_eigenvalue(const CouplingVariant& variant, double eps, std::size_t N) {
  return kth_eigenvalue(build_secular(variant, eps, N), 0);
}

namespace {

// Bindings mu_j (descending) of the roots, each refined to width <= tol.
std::vector<double> isolate_roots(const SecularSystem& sys, double tol) {
  const double mu_top = 0.5;
  const double mu_edge = kEdgeOffset;
  const std::size_t base = sys.inertia(mu_top);
  const std::size_t edge = sys.inertia(mu_edge);
  if (edge < base) throw ConsistencyError("inertia decreased towards the threshold");

  std::vector<double> roots;
  double upper = mu_top;
  for (std::size_t j = 1; j <= edge - base; ++j) {
    // inertia(lo) >= base + j, inertia(hi) < base + j
    double lo = mu_edge;
    double hi = upper;
    while (hi - lo > tol) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      const std::size_t c = sys.inertia(mid);
      if (c < base || c > edge) throw ConsistencyError("non-monotone crossing count during bisection");
      if (c >= base + j)
        lo = mid;
      else
        hi = mid;
    }
    const double root = 0.5 * (lo + hi);
    if (!roots.empty() && root > roots.back()) throw ConsistencyError("roots out of order");
    roots.push_back(root);
    upper = hi;
  }
  if (roots.size() != edge - base) throw ConsistencyError("root count disagrees with inertia count");
  return roots;
}

SpectralScan scan_without_gap(const CouplingVariant& variant, std::size_t N, double tol) {
  SecularSystem sys(variant, N);
  SpectralScan scan{variant, N, {}, {}, 0.0};
  for (double mu : isolate_roots(sys, tol)) {
    scan.eigenvalues.push_back(0.5 - mu);
    scan.near_threshold.push_back(mu < tol);
  }
  return scan;
}

}  // namespace

SpectralScan find_spectrum(const CouplingVariant& variant, std::size_t N, double tol) {
  if (N < 2) throw DomainError("find_spectrum needs N >= 2");
  if (!(tol > 0.0)) throw DomainError("find_spectrum needs tol > 0");
  SpectralScan scan = scan_without_gap(variant, N, tol);
  const SpectralScan half = scan_without_gap(variant, std::max<std::size_t>(N / 2, 1), tol);
  if (half.eigenvalues.size() != scan.eigenvalues.size()) {
    scan.convergence_gap = std::numeric_limits<double>::infinity();
  } else {
    for (std::size_t j = 0; j < scan.eigenvalues.size(); ++j)
      scan.convergence_gap = std::max(scan.convergence_gap, std::abs(scan.eigenvalues[j] - half.eigenvalues[j]));
  }
  return scan;
}

SpectralScan find_spectrum_adaptive(const CouplingVariant& variant, double tol, double gap_tol,
                                    std::size_t N_start, std::size_t N_max) {
  for (std::size_t N = std::max<std::size_t>(N_start, 2); N <= N_max; N *= 2) {
    SpectralScan scan = find_spectrum(variant, N, tol);
    if (scan.convergence_gap < gap_tol) return scan;
  }
  throw ConvergenceError("find_spectrum_adaptive: gap above " + std::to_string(gap_tol) + " at N = " +
                         std::to_string(N_max));
}

std::size_t count_eigenvalues(const CouplingVariant& variant, std::size_t N) {
  SecularSystem sys(variant, N);
  const std::size_t base = sys.inertia(0.5);
  const std::size_t edge = sys.inertia(kEdgeOffset);
  if (edge < base) throw ConsistencyError("inertia decreased towards the threshold");
  return edge - base;
}

double coupling_threshold(VariantKind kind, std::size_t j, std::size_t N, double tol) {
  if (j < 2) throw DomainError("coupling_threshold needs j >= 2");
  if (!(tol > 0.0)) throw DomainError("coupling_threshold needs tol > 0");

  // Map a strength parameter s in (0, 1) to the coupling; the count is
  // non-decreasing in s for both variants.
  const auto coupling_at = [kind](double s) {
    return kind == VariantKind::Delta ? kDeltaCritical * s : kDeltaPrimeCritical / s;
  };
  const auto count_at = [&](double s) {
    const double c = coupling_at(s);
    return count_eigenvalues(kind == VariantKind::Delta ? CouplingVariant::delta(c) : CouplingVariant::delta_prime(c),
                             N);
  };

  double s_lo = 0.5;
  if (count_at(s_lo) >= j) s_lo = 0.0;
  double s_hi = s_lo;
  for (int k = 2; k <= 45; ++k) {
    const double s = 1.0 - std::ldexp(1.0, -k);
    if (count_at(s) >= j) {
      s_hi = s;
      break;
    }
    s_lo = s;
  }
  if (s_hi <= s_lo)
    throw ThresholdNotFound("coupling_threshold: fewer than " + std::to_string(j) + " eigenvalues at N = " +
                                std::to_string(N),
                            coupling_at(0.5), coupling_at(s_lo));

  // Bisection in the coupling itself so that tol is a coupling tolerance.
  double c_lo = coupling_at(s_lo);
  double c_hi = coupling_at(s_hi);
  const auto count_c = [&](double c) {
    return count_eigenvalues(kind == VariantKind::Delta ? CouplingVariant::delta(c) : CouplingVariant::delta_prime(c),
                             N);
  };
  while (std::abs(c_hi - c_lo) > tol) {
    const double mid = 0.5 * (c_lo + c_hi);
    if (count_c(mid) >= j)
      c_hi = mid;
    else
      c_lo = mid;
  }
  return 0.5 * (c_lo + c_hi);
}

PowerLawFit fit_power_law(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw DomainError("fit_power_law needs >= 2 matching points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw DomainError("fit_power_law needs positive data");
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double denom = n * sxx - sx * sx;
  if (denom == 0.0) throw DomainError("fit_power_law: degenerate abscissae");
  const double slope = (n * sxy - sx * sy) / denom;
  const double intercept = (sy - slope * sx) / n;
  return {slope, std::exp(intercept)};
}

namespace {

// Largest binding carrying a root, to relative width rel_tol.
double ground_binding_at(const SecularSystem& sys, double rel_tol) {
  const std::size_t base = sys.inertia(0.5);
  if (sys.inertia(kEdgeOffset) <= base) throw ConvergenceError("no bound state above the edge offset");
  double lo = kEdgeOffset;
  double hi = 0.5;
  while (hi - lo > rel_tol * lo) {
    const double mid = std::sqrt(lo * hi);
    if (mid <= lo || mid >= hi) break;
    if (sys.inertia(mid) > base)
      lo = mid;
    else
      hi = mid;
  }
  return std::sqrt(lo * hi);
}

}  // namespace

GroundBinding converged_ground_binding(const CouplingVariant& variant, double rel_tol, std::size_t N_start,
                                       std::size_t N_max) {
  double previous = ground_binding_at(SecularSystem(variant, N_start), 0.1 * rel_tol);
  for (std::size_t N = 2 * N_start; N <= N_max; N *= 2) {
    const double current = ground_binding_at(SecularSystem(variant, N), 0.1 * rel_tol);
    if (std::abs(current - previous) <= rel_tol * current) return {current, N};
    previous = current;
  }
  throw ConvergenceError("ground-state binding not converged at N = " + std::to_string(N_max));
}

PowerLawFit weak_coupling_fit(VariantKind kind, std::span<const double> couplings) {
  std::vector<double> bindings;
  bindings.reserve(couplings.size());
  for (double c : couplings) {
    const CouplingVariant v = kind == VariantKind::Delta ? CouplingVariant::delta(c) : CouplingVariant::delta_prime(c);
    bindings.push_back(converged_ground_binding(v).binding);
  }
  return fit_power_law(couplings, bindings);
}

namespace {

double mu_ratio(VariantKind kind, double coupling) {
  if (kind == VariantKind::Delta) {
    if (coupling < 0.0) throw DomainError("delta coupling must be >= 0");
    return coupling == 0.0 ? std::numeric_limits<double>::infinity() : kDeltaCritical / coupling;
  }
  if (!(coupling > 0.0)) throw DomainError("delta-prime coupling must be > 0");
  return coupling / kDeltaPrimeCritical;
}

}  // namespace

double asymptotic_count(VariantKind kind, double coupling) {
  const double mu = mu_ratio(kind, coupling);
  const double excess = mu - 1.0;
  if (excess < -kCountCutoff) throw DomainError("asymptotic_count: supercritical coupling");
  if (excess <= kCountCutoff) return std::numeric_limits<double>::infinity();
  return 1.0 / (4.0 * std::sqrt(2.0 * excess));
}

double coupling_for_count(VariantKind kind, double count) {
  if (!(count > 0.0)) throw DomainError("coupling_for_count needs a positive count");
  const double mu = 1.0 + 1.0 / (32.0 * count * count);
  return kind == VariantKind::Delta ? kDeltaCritical / mu : kDeltaPrimeCritical * mu;
}

}  // namespace sslab
