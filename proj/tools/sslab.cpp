#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "sslab/errors.hpp"
#include "sslab/io.hpp"
#include "sslab/parallel.hpp"
#include "sslab/resonance.hpp"
#include "sslab/schrodinger1d.hpp"
#include "sslab/secular.hpp"
#include "sslab/trap2d.hpp"
#include "sslab/wavefields.hpp"

namespace {

using namespace sslab;
namespace fs = std::filesystem;

struct Common {
  std::string output;
  std::string format = "csv";
  unsigned jobs = 1;
};

// Usage errors detected after parsing (exit 2).
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("-o,--output", c.output, "output file ('-' for stdout; default $SSLAB_OUTPUT_DIR/<command>.<ext>)");
  sub->add_option("--format", c.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  sub->add_option("--jobs", c.jobs, "worker threads for sweeps")->check(CLI::PositiveNumber);
}

// Full parameter set of the subcommand, in declaration order.
void record_parameters(const CLI::App* sub, Table& t) {
  t.set("command", sub->get_name());
  for (const CLI::Option* opt : sub->get_options()) {
    if (opt->get_lnames().empty()) continue;
    const std::string& name = opt->get_lnames().front();
    if (name == "help" || name == "output" || name == "format" || name == "jobs") continue;
    std::string value;
    if (opt->get_items_expected_max() == 0) {
      value = opt->count() ? "true" : "false";
    } else if (opt->count()) {
      for (const auto& r : opt->results()) value += (value.empty() ? "" : " ") + r;
    } else {
      value = opt->get_default_str();
      if (value == "{}") value.clear();
    }
    t.set(name, value);
  }
}

fs::path target_path(const Common& c, const std::string& command) {
  if (!c.output.empty()) return c.output;
  return output_dir() / (command + "." + c.format);
}

void emit(const Common& c, const std::string& command, const Table& t) {
  const std::string text = [&] {
    if (c.format == "json") return to_json(t);
    std::ostringstream os;
    write_csv(os, t);
    return os.str();
  }();
  if (c.output == "-") {
    std::cout << text;
    return;
  }
  const fs::path path = target_path(c, command);
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  os << text;
  std::cerr << "wrote " << path.string() << '\n';
}

std::string num(double v) { return format_number(v); }
std::string num(std::size_t v) { return format_number(v); }

// ---- coupling selection shared by spectrum/field ----

struct CouplingArgs {
  std::string variant = "delta";
  std::vector<double> lambda, beta;
  std::string lambda_grid, beta_grid;
};

void add_coupling(CLI::App* sub, CouplingArgs& a, bool grids) {
  sub->add_option("--variant", a.variant, "delta or delta-prime")->check(CLI::IsMember({"delta", "delta-prime"}));
  sub->add_option("--lambda", a.lambda, "delta coupling(s)");
  sub->add_option("--beta", a.beta, "delta-prime coupling(s)");
  if (grids) {
    sub->add_option("--lambda-grid", a.lambda_grid, "start:end:step");
    sub->add_option("--beta-grid", a.beta_grid, "start:end:step");
  }
}

VariantKind kind_of(const std::string& v) { return v == "delta" ? VariantKind::Delta : VariantKind::DeltaPrime; }

std::vector<double> couplings(const CouplingArgs& a) {
  const bool delta = kind_of(a.variant) == VariantKind::Delta;
  std::vector<double> out = delta ? a.lambda : a.beta;
  const std::string& grid = delta ? a.lambda_grid : a.beta_grid;
  if (!grid.empty())
    for (double x : parse_grid(grid)) out.push_back(x);
  if ((delta && (!a.beta.empty() || !a.beta_grid.empty())) || (!delta && (!a.lambda.empty() || !a.lambda_grid.empty())))
    throw UsageError(delta ? "--beta is for --variant delta-prime" : "--lambda is for --variant delta");
  if (out.empty()) throw UsageError(delta ? "need --lambda or --lambda-grid" : "need --beta or --beta-grid");
  return out;
}

CouplingVariant make_variant(VariantKind kind, double c) {
  return kind == VariantKind::Delta ? CouplingVariant::delta(c) : CouplingVariant::delta_prime(c);
}

// ---- commands ----

struct SpectrumArgs {
  CouplingArgs coupling;
  std::size_t N = 4000;
  double tol = 1e-10;
  bool adaptive = false;
  double gap_tol = 1e-7;
};

int cmd_spectrum(const CLI::App* sub, const Common& c, const SpectrumArgs& a) {
  const VariantKind kind = kind_of(a.coupling.variant);
  const std::vector<double> grid = couplings(a.coupling);
  std::vector<CouplingVariant> variants;
  for (double x : grid) variants.push_back(make_variant(kind, x));

  struct Row {
    bool subcritical;
    SpectralScan scan;
  };
  const auto rows = parallel_map(grid.size(), c.jobs, [&](std::size_t i) {
    const CouplingVariant& v = variants[i];
    if (!v.subcritical()) return Row{false, SpectralScan{v, a.N, {}, {}, 0.0}};
    return Row{true, a.adaptive ? find_spectrum_adaptive(v, a.tol, a.gap_tol) : find_spectrum(v, a.N, a.tol)};
  });

  std::size_t kmax = 0;
  for (const Row& r : rows) kmax = std::max(kmax, r.scan.eigenvalues.size());
  Table t;
  record_parameters(sub, t);
  t.columns = {"coupling", "regime", "N", "count", "predicted_count", "near_threshold", "convergence_gap"};
  for (std::size_t k = 1; k <= kmax; ++k) t.columns.push_back("eps_" + std::to_string(k));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const Row& r = rows[i];
    std::size_t flagged = 0;
    for (bool b : r.scan.near_threshold) flagged += b;
    std::vector<std::string> row = {num(grid[i]),
                                    r.subcritical ? "subcritical" : "supercritical",
                                    r.subcritical ? num(r.scan.N) : "",
                                    r.subcritical ? num(r.scan.eigenvalues.size()) : "",
                                    r.subcritical && grid[i] > 0.0 ? num(asymptotic_count(kind, grid[i])) : "",
                                    r.subcritical ? num(flagged) : "",
                                    r.subcritical ? num(r.scan.convergence_gap) : ""};
    for (std::size_t k = 0; k < kmax; ++k) row.push_back(k < r.scan.eigenvalues.size() ? num(r.scan.eigenvalues[k]) : "");
    t.add_row(std::move(row));
    if (!r.subcritical)
      std::cerr << "coupling " << grid[i] << ": supercritical, no discrete spectrum in (0, 1/2) reported\n";
  }
  emit(c, "spectrum", t);
  return 0;
}

struct ThresholdArgs {
  std::string variant = "delta";
  std::size_t j_min = 2, j_max = 5;
  std::size_t N = 8000;
  double tol = 1e-7;
};

int cmd_thresholds(const CLI::App* sub, const Common& c, const ThresholdArgs& a) {
  if (a.j_min < 2 || a.j_max < a.j_min) throw UsageError("need 2 <= --j-min <= --j-max");
  const VariantKind kind = kind_of(a.variant);
  const std::size_t n = a.j_max - a.j_min + 1;
  const auto values = parallel_map(n, c.jobs, [&](std::size_t i) { return coupling_threshold(kind, a.j_min + i, a.N, a.tol); });
  Table t;
  record_parameters(sub, t);
  t.columns = {"j", "coupling", "N", "tol"};
  for (std::size_t i = 0; i < n; ++i) {
    t.add_row({num(a.j_min + i), num(values[i]), num(a.N), num(a.tol)});
    std::printf("j=%zu  coupling=%s\n", a.j_min + i, num(values[i]).c_str());
  }
  emit(c, "thresholds", t);
  return 0;
}

struct WeakfitArgs {
  std::string variant = "delta";
  double lambda_min = 0.05, lambda_max = 0.3;
  double beta_min = 8.0, beta_max = 24.0;
  std::size_t points = 11;
  double rel_tol = 1e-9;
};

int cmd_weakfit(const CLI::App* sub, const Common& c, const WeakfitArgs& a) {
  const VariantKind kind = kind_of(a.variant);
  const bool delta = kind == VariantKind::Delta;
  const double lo = delta ? a.lambda_min : a.beta_min, hi = delta ? a.lambda_max : a.beta_max;
  if (a.points < 2 || !(lo > 0.0) || !(hi > lo)) throw UsageError("need >= 2 points and 0 < min < max");
  std::vector<double> x(a.points);
  for (std::size_t i = 0; i < a.points; ++i) x[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(a.points - 1);
  const auto gb = parallel_map(a.points, c.jobs, [&](std::size_t i) {
    return converged_ground_binding(make_variant(kind, x[i]), a.rel_tol);
  });
  std::vector<double> y;
  for (const auto& g : gb) y.push_back(g.binding);
  const PowerLawFit fit = fit_power_law(x, y);

  Table t;
  record_parameters(sub, t);
  t.set("exponent", num(fit.exponent));
  t.set("coefficient", num(fit.coefficient));
  t.columns = {"coupling", "binding", "N", "fit"};
  for (std::size_t i = 0; i < a.points; ++i)
    t.add_row({num(x[i]), num(y[i]), num(gb[i].N), num(fit.coefficient * std::pow(x[i], fit.exponent))});
  std::printf("exponent %s coefficient %s\n", num(fit.exponent).c_str(), num(fit.coefficient).c_str());
  emit(c, "weakfit", t);
  return 0;
}

struct ResonanceArgs {
  std::vector<double> lambda;
  std::string lambda_grid;
  std::size_t sheet = 2;
  std::vector<double> seed;
  std::size_t N = 200;
  bool scan = false, birth = false;
  std::string re_range = "1.2:1.6", im_range = "-0.3:0";
  std::size_t samples = 61;
  double residual_tol = 1e-8;
};

std::pair<double, double> parse_range(const std::string& s) {
  const auto colon = s.find(':');
  if (colon == std::string::npos) throw UsageError("range must be a:b, got '" + s + "'");
  const double a = parse_number(s.substr(0, colon)), b = parse_number(s.substr(colon + 1));
  if (!(b > a)) throw UsageError("range needs a < b: '" + s + "'");
  return {a, b};
}

int cmd_resonances(const CLI::App* sub, const Common& c, const ResonanceArgs& a) {
  if (a.sheet < 1) throw UsageError("--sheet must be >= 1");
  const SheetSignature sheet = SheetSignature::nth(a.sheet);
  std::vector<double> lam = a.lambda;
  if (!a.lambda_grid.empty())
    for (double x : parse_grid(a.lambda_grid)) lam.push_back(x);
  if (lam.empty()) throw UsageError("need --lambda or --lambda-grid");
  if (!a.seed.empty() && a.seed.size() != 2) throw UsageError("--seed takes two numbers: re im");
  PoleOptions opts;
  opts.residual_tol = a.residual_tol;
  const auto [re_lo, re_hi] = parse_range(a.re_range);
  const auto [im_lo, im_hi] = parse_range(a.im_range);
  const ScanWindow window{re_lo, re_hi, im_lo, im_hi, a.samples + a.samples / 3, a.samples};

  Table t;
  record_parameters(sub, t);
  t.columns = {"lambda", "re_z", "im_z", "sheet_id", "residual", "N"};
  const auto add = [&](const ResonancePole& p) {
    t.add_row({num(p.lambda), num(p.z.real()), num(p.z.imag()), num(p.sheet.sheet_id()), num(p.residual), num(p.N)});
  };
  const complex seed = a.seed.empty()
                           ? complex(static_cast<double>(a.sheet) - 0.5, 0.0) + weak_coupling_offset(a.sheet - 1, lam.front())
                           : complex(a.seed[0], a.seed[1]);
  if (a.birth) {
    if (a.lambda_grid.empty()) throw UsageError("--birth needs --lambda-grid start:end");
    // any step in the grid is ignored here
    const std::string ends = a.lambda_grid.substr(0, a.lambda_grid.find(':', a.lambda_grid.find(':') + 1));
    const auto [lo, hi] = parse_range(ends);
    const PoleBirth b = detect_pole_birth(lo, hi, sheet, window, a.N, 140, opts);
    t.set("birth_found", b.found ? "true" : "false");
    t.set("diagnostic", b.diagnostic);
    if (b.found) {
      t.set("birth_lambda", num(b.lambda));
      ResonancePole at_birth = b.emerged;
      at_birth.lambda = b.lambda;
      at_birth.z = b.z;
      add(at_birth);
      add(b.emerged);
      std::printf("pole birth near lambda=%s at z=(%s, %s)\n", num(b.lambda).c_str(), num(b.z.real()).c_str(),
                  num(b.z.imag()).c_str());
    } else {
      std::printf("%s\n", b.diagnostic.c_str());
    }
  } else if (a.scan) {
    const auto found = parallel_map(lam.size(), c.jobs, [&](std::size_t i) { return scan_poles(lam[i], sheet, window, a.N, opts); });
    for (const auto& ps : found)
      for (const auto& p : ps) add(p);
  } else if (lam.size() == 1) {
    add(find_pole(lam.front(), sheet, seed, a.N, opts));
  } else {
    const Trajectory tr = track_trajectory(lam.front(), lam.back(), lam.size() - 1, sheet, seed, a.N, opts);
    for (const auto& p : tr.poles) add(p);
    t.set("lost", tr.lost ? "true" : "false");
    if (!tr.diagnostic.empty()) {
      t.set("diagnostic", tr.diagnostic);
      std::cerr << tr.diagnostic << '\n';
    }
  }
  emit(c, "resonances", t);
  return 0;
}

struct ScatterArgs {
  double lambda = 1.0;
  std::vector<double> k2;
  std::string k2_grid;
  std::size_t N = 0;
};

int cmd_scatter(const CLI::App* sub, const Common& c, const ScatterArgs& a) {
  std::vector<double> e = a.k2;
  if (!a.k2_grid.empty())
    for (double x : parse_grid(a.k2_grid)) e.push_back(x);
  if (e.empty()) throw UsageError("need --k2 or --k2-grid");
  const auto sols = parallel_map(e.size(), c.jobs, [&](std::size_t i) { return scattering_matrix(std::sqrt(e[i]), a.lambda, a.N); });
  Table t;
  record_parameters(sub, t);
  t.columns = {"k2", "open_channels", "N", "m", "n", "re_r", "im_r", "re_t", "im_t", "flux_defect", "condition"};
  for (std::size_t i = 0; i < e.size(); ++i) {
    const ScatteringSolution& s = sols[i];
    const double defect = flux_defect(s);
    if (s.ill_conditioned) std::cerr << "k2 " << e[i] << ": ill-conditioned system, condition " << s.condition << '\n';
    for (std::size_t m = 0; m < s.open_channels; ++m)
      for (std::size_t n = 0; n < s.open_channels; ++n)
        t.add_row({num(e[i]), num(s.open_channels), num(s.N), num(m), num(n), num(s.r[m][n].real()), num(s.r[m][n].imag()),
                   num(s.t[m][n].real()), num(s.t[m][n].imag()), num(defect), num(s.condition)});
  }
  emit(c, "scatter", t);
  return 0;
}

struct GammaArgs {
  std::vector<double> p;
  std::string p_grid;
  double tol = 1e-8;
  bool minimum = false;
};

int cmd_gamma(const CLI::App* sub, const Common& c, const GammaArgs& a) {
  std::vector<double> ps = a.p;
  if (!a.p_grid.empty())
    for (double x : parse_grid(a.p_grid)) ps.push_back(x);
  if (ps.empty() && !a.minimum) throw UsageError("need --p, --p-grid or --minimum");
  for (double p : ps)
    if (!(p >= 1.0)) throw UsageError("p must be >= 1");
  const auto vals = parallel_map(ps.size(), c.jobs, [&](std::size_t i) { return gamma_p(ps[i], a.tol); });
  Table t;
  record_parameters(sub, t);
  t.columns = {"p", "gamma", "error"};
  for (const auto& g : vals) t.add_row({num(g.p), num(g.gamma), num(g.error)});
  if (a.minimum) {
    const GammaValue m = gamma_minimum(1.5, 2.1);
    t.set("minimum_p", num(m.p));
    t.set("minimum_gamma", num(m.gamma));
    std::printf("minimum gamma %s at p %s\n", num(m.gamma).c_str(), num(m.p).c_str());
  }
  emit(c, "gamma", t);
  return 0;
}

struct TrapArgs {
  double p = 2.0;
  std::vector<double> lambda;
  bool critical = false;
  std::string R_grid = "4:12";
  double h = 0.08;
  std::size_t count = 2;
  bool refine = false;
  std::string field;
  double level = 1e-3;
};

int cmd_trap2d(const CLI::App* sub, const Common& c, const TrapArgs& a) {
  if (a.critical == !a.lambda.empty()) throw UsageError("give exactly one of --lambda and --critical");
  if (a.count < 1) throw UsageError("--count must be >= 1");
  const double lambda = a.critical ? gamma_p(a.p, 1e-6).gamma : a.lambda.front();
  const TrapPotential V(a.p, lambda);
  const std::vector<double> R = parse_grid(a.R_grid);
  for (double r : R) DiscProblem{V, r, a.h, Boundary::Dirichlet}.validate();
  const EigensolverOptions opts;
  const SqueezeReport rep = squeeze_scan(V, R, a.h, a.count, a.refine, opts, c.jobs);

  Table t;
  record_parameters(sub, t);
  t.set("lambda_used", num(lambda));
  t.set("estimate", num(rep.estimate));
  t.set("gap", num(rep.gap));
  t.set("R_star", num(rep.R_star));
  t.set("bracket_ok", rep.bracket_ok ? "true" : "false");
  t.set("dirichlet_monotone", rep.dirichlet_monotone ? "true" : "false");
  t.columns = {"R"};
  for (const char* bc : {"dirichlet", "neumann"})
    for (std::size_t k = 1; k <= a.count; ++k) t.columns.push_back(std::string(bc) + "_" + std::to_string(k));
  for (const char* bc : {"dirichlet", "neumann"})
    for (std::size_t k = 1; k <= a.count; ++k) t.columns.push_back(std::string(bc) + "_err_" + std::to_string(k));
  for (const SqueezeRow& r : rep.rows) {
    std::vector<std::string> row = {num(r.R)};
    for (const auto* v : {&r.dirichlet, &r.neumann, &r.dirichlet_error, &r.neumann_error})
      for (double x : *v) row.push_back(num(x));
    t.add_row(std::move(row));
  }
  for (const auto& w : rep.warnings) std::cerr << "warning: " << w << '\n';
  std::printf("E1 estimate %s, gap %s, bracket [%s, %s]\n", num(rep.estimate).c_str(), num(rep.gap).c_str(),
              num(rep.rows.back().neumann[0]).c_str(), num(rep.rows.back().dirichlet[0]).c_str());
  emit(c, "trap2d", t);

  // Mesh metadata sidecar.
  if (c.output != "-") {
    nlohmann::ordered_json j;
    j["version"] = kVersion;
    j["p"] = a.p;
    j["lambda"] = lambda;
    j["h"] = a.h;
    j["refined"] = a.refine;
    j["residual_tol"] = opts.residual_tol;
    j["problems"] = nlohmann::ordered_json::array();
    for (const SqueezeRow& r : rep.rows)
      for (const auto& [bc, vals, errs] : {std::tuple{"dirichlet", &r.dirichlet, &r.dirichlet_error},
                                           std::tuple{"neumann", &r.neumann, &r.neumann_error}})
        j["problems"].push_back({{"R", r.R}, {"boundary", bc}, {"eigenvalues", *vals}, {"h_errors", *errs}});
    fs::path side = target_path(c, "trap2d");
    side += ".meta.json";
    std::ofstream(side) << j.dump(2) << '\n';
  }

  if (!a.field.empty()) {
    const GroundStateField g = ground_state_field({V, R.back(), a.h, Boundary::Dirichlet}, a.level);
    std::ofstream os(a.field, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write " + a.field);
    write_grid(os, g.field);
    std::printf("ground state E=%s, %zu contour segments at level %s%s\n", num(g.eigenvalue).c_str(), g.contour.size(),
                num(g.level).c_str(), g.degenerate ? " (degenerate, symmetrized)" : "");
  }
  return 0;
}

struct FieldArgs {
  CouplingArgs coupling;
  std::size_t index = 1;
  std::size_t N = 2000;
  std::string x_range = "-8:8", y_range = "-6:6";
  double step = 0.02;
  std::string layout = "grid";
};

int cmd_field(const CLI::App* sub, const Common& c, const FieldArgs& a) {
  const std::vector<double> grid = couplings(a.coupling);
  if (grid.size() != 1) throw UsageError("field takes a single coupling");
  const CouplingVariant v = make_variant(kind_of(a.coupling.variant), grid.front());
  const SpectralScan scan = find_spectrum(v, a.N, 1e-12);
  if (a.index < 1 || a.index > scan.eigenvalues.size())
    throw UsageError("--index out of range: " + std::to_string(scan.eigenvalues.size()) + " eigenvalues found");
  const ModeExpansion mode = null_vector(v, scan.eigenvalues[a.index - 1], a.N);
  const auto [x0, x1] = parse_range(a.x_range);
  const auto [y0, y1] = parse_range(a.y_range);
  const Field2D f = evaluate_field(mode, GridSpec{x0, x1, y0, y1, a.step});
  const int lines = nodal_count(f);
  std::printf("eps=%s nodal_lines=%d%s\n", num(mode.eps).c_str(), lines, f.under_resolved ? " (under-resolved grid)" : "");

  const fs::path path = c.output.empty() ? output_dir() / (a.layout == "grid" ? "field.sslgrid" : "field.csv") : fs::path(c.output);
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  if (a.layout == "grid") {
    write_grid(os, f);
  } else {
    Table t;
    record_parameters(sub, t);
    t.set("eps", num(mode.eps));
    t.set("nodal_lines", std::to_string(lines));
    t.set("under_resolved", f.under_resolved ? "true" : "false");
    t.columns = {"x", "y", "value"};
    for (std::size_t iy = 0; iy < f.ny; ++iy)
      for (std::size_t ix = 0; ix < f.nx; ++ix) t.rows.push_back({num(f.x(ix)), num(f.y(iy)), num(f.at(ix, iy))});
    write_csv(os, t);
  }
  std::cerr << "wrote " << path.string() << '\n';
  return 0;
}

struct ClassifyArgs {
  double omega = 1.0;
  double lambda = 1.0;
  double a = 1.0;
  double ramp = 0.01;
};

int cmd_classify(const CLI::App* sub, const Common& c, const ClassifyArgs& a) {
  const Classification k = classify_comparison(mollified_well(a.a, a.ramp), a.omega, a.lambda);
  Table t;
  record_parameters(sub, t);
  t.columns = {"omega", "lambda", "lambda_crit", "inf_sigma", "regime"};
  t.add_row({num(a.omega), num(a.lambda), num(k.lambda_crit), num(k.inf_sigma), to_string(k.regime)});
  std::printf("lambda_crit %s inf_sigma %s regime %s\n", num(k.lambda_crit).c_str(), num(k.inf_sigma).c_str(),
              to_string(k.regime));
  emit(c, "classify", t);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral lab for the Smilansky-Solomyak model and its relatives"};
  app.require_subcommand(1);
  app.option_defaults()->always_capture_default();
  app.set_version_flag("--version", std::string(kVersion));

  Common common;
  std::function<int()> run;

  SpectrumArgs sa;
  auto* spectrum = app.add_subcommand("spectrum", "discrete eigenvalues in (0, 1/2) over a coupling grid");
  add_coupling(spectrum, sa.coupling, true);
  spectrum->add_option("--N", sa.N, "truncation size")->check(CLI::Range(2, 1 << 24));
  spectrum->add_option("--tol", sa.tol, "root tolerance")->check(CLI::PositiveNumber);
  spectrum->add_flag("--adaptive", sa.adaptive, "double N from 500 until the gap is below --gap-tol");
  spectrum->add_option("--gap-tol", sa.gap_tol)->check(CLI::PositiveNumber);
  add_common(spectrum, common);
  spectrum->callback([&] { run = [&] { return cmd_spectrum(spectrum, common, sa); }; });

  ThresholdArgs ta;
  auto* thresholds = app.add_subcommand("thresholds", "couplings at which the j-th eigenvalue appears");
  thresholds->add_option("--variant", ta.variant)->check(CLI::IsMember({"delta", "delta-prime"}));
  thresholds->add_option("--j-min", ta.j_min);
  thresholds->add_option("--j-max", ta.j_max);
  thresholds->add_option("--N", ta.N)->check(CLI::Range(2, 1 << 24));
  thresholds->add_option("--tol", ta.tol)->check(CLI::PositiveNumber);
  add_common(thresholds, common);
  thresholds->callback([&] { run = [&] { return cmd_thresholds(thresholds, common, ta); }; });

  WeakfitArgs wa;
  auto* weakfit = app.add_subcommand("weakfit", "power-law fit of the ground-state binding");
  weakfit->add_option("--variant", wa.variant)->check(CLI::IsMember({"delta", "delta-prime"}));
  weakfit->add_option("--lambda-min", wa.lambda_min);
  weakfit->add_option("--lambda-max", wa.lambda_max);
  weakfit->add_option("--beta-min", wa.beta_min);
  weakfit->add_option("--beta-max", wa.beta_max);
  weakfit->add_option("--points", wa.points);
  weakfit->add_option("--rel-tol", wa.rel_tol)->check(CLI::PositiveNumber);
  add_common(weakfit, common);
  weakfit->callback([&] { run = [&] { return cmd_weakfit(weakfit, common, wa); }; });

  ResonanceArgs ra;
  auto* resonances = app.add_subcommand("resonances", "resonance poles: single, trajectory, scan or birth search");
  resonances->add_option("--lambda", ra.lambda);
  resonances->add_option("--lambda-grid", ra.lambda_grid, "start:end:step");
  resonances->add_option("--sheet", ra.sheet, "sheet n (first n-1 momenta flipped)");
  resonances->add_option("--seed", ra.seed, "initial guess: re im")->expected(2)->allow_extra_args(false);
  resonances->add_option("--N", ra.N)->check(CLI::Range(2, 1 << 20));
  resonances->add_flag("--scan", ra.scan, "scan the window for all poles");
  resonances->add_flag("--birth", ra.birth, "look for a pole appearing between the grid ends");
  resonances->add_option("--re-range", ra.re_range, "scan window a:b");
  resonances->add_option("--im-range", ra.im_range, "scan window a:b");
  resonances->add_option("--samples", ra.samples, "scan samples along Im z")->check(CLI::Range(3, 2000));
  resonances->add_option("--residual-tol", ra.residual_tol)->check(CLI::PositiveNumber);
  add_common(resonances, common);
  resonances->callback([&] { run = [&] { return cmd_resonances(resonances, common, ra); }; });

  ScatterArgs sca;
  auto* scatter = app.add_subcommand("scatter", "open-channel reflection and transmission amplitudes");
  scatter->add_option("--lambda", sca.lambda);
  scatter->add_option("--k2", sca.k2, "energy k^2");
  scatter->add_option("--k2-grid", sca.k2_grid, "start:end:step");
  scatter->add_option("--N", sca.N, "truncation (0: open channels + 60)");
  add_common(scatter, common);
  scatter->callback([&] { run = [&] { return cmd_scatter(scatter, common, sca); }; });

  GammaArgs ga;
  auto* gamma = app.add_subcommand("gamma", "ground state of -u'' + |t|^p u");
  gamma->add_option("--p", ga.p);
  gamma->add_option("--p-grid", ga.p_grid, "start:end:step");
  gamma->add_option("--tol", ga.tol)->check(CLI::PositiveNumber);
  gamma->add_flag("--minimum", ga.minimum, "locate the minimum over p in [1.5, 2.1]");
  add_common(gamma, common);
  gamma->callback([&] { run = [&] { return cmd_gamma(gamma, common, ga); }; });

  TrapArgs tra;
  auto* trap = app.add_subcommand("trap2d", "Dirichlet/Neumann squeeze for -Laplacian + |xy|^p - lambda r^(2p/(p+2))");
  trap->add_option("--p", tra.p)->check(CLI::Range(1.0, 100.0));
  trap->add_option("--lambda", tra.lambda);
  trap->add_flag("--critical", tra.critical, "use lambda = gamma_p");
  trap->add_option("--R-grid", tra.R_grid, "disc radii start:end[:step]");
  trap->add_option("--step", tra.h, "grid step h (<= R/50)")->check(CLI::PositiveNumber);
  trap->add_option("--count", tra.count, "eigenvalues per problem");
  trap->add_flag("--refine", tra.refine, "Richardson extrapolation from h and h/2");
  trap->add_option("--field", tra.field, "write the Dirichlet ground state at the largest R (binary grid)");
  trap->add_option("--level", tra.level, "contour level relative to max|u|");
  add_common(trap, common);
  trap->callback([&] { run = [&] { return cmd_trap2d(trap, common, tra); }; });

  FieldArgs fa;
  auto* field = app.add_subcommand("field", "eigenfunction on a grid and its nodal-line count");
  add_coupling(field, fa.coupling, false);
  field->add_option("--index", fa.index, "eigenvalue index, 1 = ground state");
  field->add_option("--N", fa.N)->check(CLI::Range(2, 1 << 20));
  field->add_option("--x-range", fa.x_range);
  field->add_option("--y-range", fa.y_range);
  field->add_option("--step", fa.step)->check(CLI::PositiveNumber);
  field->add_option("--layout", fa.layout, "grid (binary) or csv")->check(CLI::IsMember({"grid", "csv"}));
  add_common(field, common);
  field->callback([&] { run = [&] { return cmd_field(field, common, fa); }; });

  ClassifyArgs ca;
  auto* classify = app.add_subcommand("classify", "sub/super-critical classification of the 1D comparison operator");
  classify->add_option("--omega", ca.omega)->check(CLI::PositiveNumber);
  classify->add_option("--lambda", ca.lambda)->check(CLI::NonNegativeNumber);
  classify->add_option("--a", ca.a, "well half-width")->check(CLI::PositiveNumber);
  classify->add_option("--ramp", ca.ramp, "mollifier ramp width")->check(CLI::PositiveNumber);
  add_common(classify, common);
  classify->callback([&] { run = [&] { return cmd_classify(classify, common, ca); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  try {
    return run();
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const DomainError& e) {
    std::cerr << "invalid parameters: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return 1;
  }
}
