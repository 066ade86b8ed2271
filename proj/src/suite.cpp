#include "fdtlab/suite.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "fdtlab/fdt.hpp"
#include "fdtlab/markov_ops.hpp"
#include "fdtlab/montecarlo.hpp"
#include "fdtlab/response.hpp"

namespace fdtlab {

namespace {

using nlohmann::json;

constexpr double kTwoPi = 2.0 * std::numbers::pi;

[[noreturn]] void fail(const std::string& field, const std::string& what) {
  throw ValidationError(field + " " + what);
}

double number_at(const json& value, const std::string& field) {
  if (!value.is_number()) fail(field, "must be a number");
  return value.get<double>();
}

std::string string_at(const json& value, const std::string& field) {
  if (!value.is_string()) fail(field, "must be a string");
  return value.get<std::string>();
}

std::vector<double> number_list(const json& value, const std::string& field) {
  if (!value.is_array()) fail(field, "must be an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < value.size(); ++i) {
    out.push_back(number_at(value[i], field + "[" + std::to_string(i) + "]"));
  }
  return out;
}

std::string pair_params(double s, double t) {
  return "{\"s\":" + format_double(s) + ",\"t\":" + format_double(t) + "}";
}

std::string single_param(const std::string& name, double v) {
  return "{\"" + name + "\":" + format_double(v) + "}";
}

int label_index(const StateSpace& space, const std::string& label,
                const std::string& field) {
  for (int i = 0; i < space.size(); ++i) {
    if (space.labels[i] == label) return i;
  }
  fail(field, "names unknown state \"" + label + "\"");
}

/// Base generator + invariant measure for a rates-kind model.
std::pair<Generator, Measure> rates_base(const ModelBundle& bundle,
                                         const SuiteConfig& config) {
  const Generator& L = *bundle.generator;
  Measure mu0 = invariant_measure(L, config.tol);
  return {L, mu0};
}

Observable resolve_observable(const ModelBundle& bundle, const std::string& name,
                              const std::string& role) {
  if (name.empty()) fail("config." + role, "must name an observable");
  return bundle.observable(name);
}

FourierSeries resolve_series(const ModelBundle& bundle, const std::string& name,
                             const FourierSeries& fallback) {
  if (name.empty()) return fallback;
  return bundle.torus_observable(name);
}

Vector sampled(const FourierSeries& series, int n) {
  Vector v(n);
  for (int i = 0; i < n; ++i) v(i) = series.value(i * kTwoPi / n);
  return v;
}

/// Check observables for the family's state space. Finite-state models name
/// entries of the observables table (defaulting to the kick direction); torus
/// models name periodic series, sampled onto the working grid (f defaults to
/// the model's own direction, g to f).
std::pair<Observable, Observable> resolve_fg(const ModelBundle& bundle,
                                             const PerturbationFamily& fam,
                                             const SuiteConfig& config) {
  if (bundle.kind == ModelKind::Torus) {
    int n = fam.base.size();
    FourierSeries fs = resolve_series(bundle, config.f_name, bundle.torus->f);
    FourierSeries gs = resolve_series(bundle, config.g_name, fs);
    return {Observable::on(fam.base.space(), sampled(fs, n)),
            Observable::on(fam.base.space(), sampled(gs, n))};
  }
  Observable f = resolve_observable(
      bundle, config.f_name.empty() ? config.direction : config.f_name, "f");
  Observable g = resolve_observable(
      bundle, config.g_name.empty() ? config.direction : config.g_name, "g");
  return {std::move(f), std::move(g)};
}

void require_torus(const ModelBundle& bundle, const std::string& op) {
  if (bundle.kind != ModelKind::Torus) {
    throw ValidationError(op + " needs a torus model");
  }
}

/// Validation-first guard: every strength in the grid must be admissible.
void require_admissible(const PerturbationFamily& fam,
                        const std::vector<double>& deltas) {
  for (double d : deltas) {
    if (!fam.admissible(d)) {
      std::ostringstream msg;
      msg << "strength " << d << " exceeds the family cap " << fam.delta_cap;
      throw DeltaTooLarge(msg.str(), d, fam.delta_cap);
    }
  }
}

std::string timestamp_utc() {
  std::time_t now = std::chrono::system_clock::to_time_t(
      std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

void apply_tolerance_overrides(Tolerances& tol, const std::string& spec) {
  std::istringstream stream(spec);
  std::string item;
  while (std::getline(stream, item, ',')) {
    if (item.empty()) continue;
    std::size_t eq = item.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw ValidationError("tolerance override \"" + item +
                            "\" must look like name=value");
    }
    std::string name = item.substr(0, eq);
    double value = 0.0;
    try {
      std::size_t used = 0;
      value = std::stod(item.substr(eq + 1), &used);
      if (used != item.size() - eq - 1) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw ValidationError("tolerance override \"" + item +
                            "\" has a malformed value");
    }
    if (!set_tolerance(tol, name, value)) {
      throw ValidationError("unknown tolerance \"" + name + "\"");
    }
  }
}

SuiteConfig parse_suite_config(const std::string& text,
                               const std::string& origin) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(origin + ": " + e.what());
  }
  if (!doc.is_object()) throw ValidationError("config document must be an object");

  SuiteConfig config;
  for (const auto& [key, value] : doc.items()) {
    if (key == "family") {
      config.family = string_at(value, key);
    } else if (key == "direction") {
      config.direction = string_at(value, key);
    } else if (key == "f") {
      config.f_name = string_at(value, key);
    } else if (key == "g") {
      config.g_name = string_at(value, key);
    } else if (key == "st_pairs") {
      if (!value.is_array() || value.empty()) fail(key, "must be a non-empty array");
      config.st_pairs.clear();
      for (std::size_t i = 0; i < value.size(); ++i) {
        std::string field = "st_pairs[" + std::to_string(i) + "]";
        if (!value[i].is_array() || value[i].size() != 2) {
          fail(field, "must be a [s, t] pair");
        }
        config.st_pairs.emplace_back(number_at(value[i][0], field + "[0]"),
                                     number_at(value[i][1], field + "[1]"));
      }
    } else if (key == "delta_grid") {
      config.delta_grid = number_list(value, key);
    } else if (key == "response_t") {
      config.response_t = number_at(value, key);
    } else if (key == "s_grid") {
      config.s_grid = number_list(value, key);
    } else if (key == "tau") {
      config.tau = number_at(value, key);
    } else if (key == "nu0_point") {
      config.nu0_point = string_at(value, key);
    } else if (key == "green_kubo_t_max") {
      config.green_kubo_t_max = number_at(value, key);
    } else if (key == "n_grid") {
      config.n_grid = static_cast<int>(number_at(value, key));
    } else if (key == "grid_sizes") {
      config.grid_sizes.clear();
      for (double v : number_list(value, key)) {
        config.grid_sizes.push_back(static_cast<int>(v));
      }
      if (config.grid_sizes.empty()) fail(key, "must name at least one size");
    } else if (key == "seed") {
      config.seed = static_cast<std::uint64_t>(number_at(value, key));
    } else if (key == "kernel_override") {
      if (!value.is_object()) fail(key, "must be {from, to, add}");
      KernelOverride ko;
      ko.from = string_at(value.at("from"), key + ".from");
      ko.to = string_at(value.at("to"), key + ".to");
      ko.add = number_at(value.at("add"), key + ".add");
      config.kernel_override = std::move(ko);
    } else if (key == "tolerances") {
      if (!value.is_object()) fail(key, "must map tolerance names to numbers");
      for (const auto& [name, entry] : value.items()) {
        if (!set_tolerance(config.tol, name,
                           number_at(entry, key + "." + name))) {
          fail(key + "." + name, "is not a known tolerance");
        }
      }
    } else if (key == "mc") {
      if (!value.is_object()) fail(key, "must be an object");
      for (const auto& [name, entry] : value.items()) {
        std::string field = key + "." + name;
        if (name == "n_paths") {
          config.mc.n_paths = static_cast<int>(number_at(entry, field));
        } else if (name == "dt") {
          config.mc.dt = number_at(entry, field);
        } else if (name == "s") {
          config.mc.s = number_at(entry, field);
        } else if (name == "t") {
          config.mc.t = number_at(entry, field);
        } else if (name == "histogram_time") {
          config.mc.histogram_time = number_at(entry, field);
        } else if (name == "bins") {
          config.mc.bins = static_cast<int>(number_at(entry, field));
        } else if (name == "n_grid_oracle") {
          config.mc.n_grid_oracle = static_cast<int>(number_at(entry, field));
        } else if (name == "paths_file") {
          config.mc.paths_file = string_at(entry, field);
        } else {
          fail(field, "is not a Monte Carlo setting");
        }
      }
    } else {
      fail(key, "is not a config field");
    }
  }
  return config;
}

SuiteConfig load_suite_config(const std::string& path) {
  std::ifstream file(path);
  if (!file) throw ParseError("cannot open config file: " + path);
  std::ostringstream text;
  text << file.rdbuf();
  return parse_suite_config(text.str(), path);
}

PerturbationFamily build_family(const ModelBundle& bundle,
                                const SuiteConfig& config) {
  std::optional<FamilyKind> kind = family_kind_from_name(config.family);
  if (!kind) {
    throw ValidationError("unknown family kind \"" + config.family + "\"");
  }

  PerturbationFamily fam;
  switch (*kind) {
    case FamilyKind::TimeChange: {
      if (bundle.kind != ModelKind::Rates) fail("family", "time_change needs a rates model");
      auto [L, mu0] = rates_base(bundle, config);
      fam = time_change_family(
          L, mu0, resolve_observable(bundle, config.direction, "direction"),
          config.tol);
      break;
    }
    case FamilyKind::Langevin: {
      if (bundle.kind != ModelKind::Rates) fail("family", "langevin needs a rates model");
      auto [L, mu0] = rates_base(bundle, config);
      fam = langevin_family(
          L, mu0, resolve_observable(bundle, config.direction, "direction"),
          config.tol);
      break;
    }
    case FamilyKind::GeneralB: {
      if (bundle.kind != ModelKind::Rates) fail("family", "general_b needs a rates model");
      auto [L, mu0] = rates_base(bundle, config);
      Matrix b = adjoint(L, mu0, config.tol).matrix() - L.matrix();
      fam = general_b_family(
          L, mu0, resolve_observable(bundle, config.direction, "direction"), b,
          config.tol);
      break;
    }
    case FamilyKind::Cycle: {
      if (bundle.kind != ModelKind::Cycles) fail("family", "cycle needs a cycles model");
      fam = cycle_family(bundle.space, *bundle.mu0, bundle.cycles,
                         resolve_observable(bundle, config.direction, "direction"),
                         config.tol);
      break;
    }
    case FamilyKind::Metropolis: {
      if (bundle.kind != ModelKind::Hamiltonian) {
        fail("family", "metropolis needs a hamiltonian model");
      }
      fam = metropolis_family(
          *bundle.graph, resolve_observable(bundle, config.direction, "direction"),
          config.tol);
      break;
    }
    case FamilyKind::Glauber: {
      if (bundle.kind != ModelKind::Hamiltonian) {
        fail("family", "glauber needs a hamiltonian model");
      }
      fam = glauber_family(
          *bundle.graph, resolve_observable(bundle, config.direction, "direction"),
          config.tol);
      break;
    }
    case FamilyKind::GridDiffusion: {
      require_torus(bundle, "family grid_diffusion");
      fam = diffusion_grid_family(*bundle.torus, config.n_grid, config.tol);
      break;
    }
  }

  if (config.kernel_override) {
    Matrix k = fam.kernel.matrix();
    int from = label_index(fam.base.space(), config.kernel_override->from,
                           "kernel_override.from");
    int to = label_index(fam.base.space(), config.kernel_override->to,
                         "kernel_override.to");
    if (from == to) fail("kernel_override", "must name an off-diagonal entry");
    k(from, to) += config.kernel_override->add;
    ResponseKernel patched = ResponseKernel::from_offdiagonal(fam.base.space(), k);
    fam = with_kernel(std::move(fam), std::move(patched));
  }
  return fam;
}

FdtReport run_suite(const ModelBundle& bundle, const SuiteConfig& config) {
  PerturbationFamily fam = build_family(bundle, config);
  const Generator& L = fam.base;
  std::string family = family_kind_name(fam.kind);

  auto [f, g] = resolve_fg(bundle, fam, config);

  if (!config.delta_grid.empty()) require_admissible(fam, config.delta_grid);

  // Exact families satisfy the identities to round-off; the grid family is a
  // second-order discretization, so its identity and symmetry residuals are
  // held to a grid-spacing-squared budget instead.
  double dyn_tol = config.tol.fdt_dynamic;
  double stat_tol = config.tol.fdt_static;
  double sym_tol = config.tol.b_symmetry;
  if (fam.kind == FamilyKind::GridDiffusion) {
    double h = kTwoPi / L.size();
    dyn_tol = 0.05 * h * h;
    stat_tol = 0.05 * h * h;
    sym_tol = h * h;
  }

  FdtReport report;
  for (auto [s, t] : config.st_pairs) {
    FdtCheckResult r = fdt_check(L, fam, f, g, s, t, config.tol);
    report.add("fdt_dynamic", family, pair_params(s, t), r.dynamic_residual,
               dyn_tol);
    report.add("fdt_static", family, pair_params(s, t), r.static_residual,
               stat_tol);
  }

  if (is_reversible(L, fam.mu0, config.tol)) {
    double b_res = b_symmetry_residual(fam, f);
    report.add("b_symmetry", family, "{}", b_res, sym_tol);

    GreenKuboResult gk =
        green_kubo(L, fam.mu0, f, g, config.green_kubo_t_max, config.tol);
    report.add("green_kubo_identity", family,
               single_param("t_max", gk.horizon), gk.identity_residual,
               config.tol.green_kubo_identity);
    report.add("green_kubo_integral", family,
               single_param("t_max", gk.horizon), gk.relative_residual,
               config.tol.green_kubo_relative);
  }

  if (!config.delta_grid.empty()) {
    // Finite-strength consistency. The error of the difference quotient
    // against the kernel response must be first-order sized at the smallest
    // strength, and must shrink linearly between the two smallest strengths
    // (a wrong kernel or rate map leaves a strength-independent floor).
    std::vector<double> deltas = config.delta_grid;
    std::sort(deltas.begin(), deltas.end());
    double scale = std::max(g.values.cwiseAbs().maxCoeff(), 1e-12);
    FiniteDifferenceResponse small = finite_difference_response(
        L, fam, g, config.response_t, deltas.front(), config.tol);
    report.add("response_eta", family, single_param("delta", deltas.front()),
               small.eta, deltas.front() * scale);
    if (deltas.size() >= 2 && deltas[1] > deltas[0]) {
      FiniteDifferenceResponse large = finite_difference_response(
          L, fam, g, config.response_t, deltas[1], config.tol);
      double floor = 1e-14 * scale;
      double ratio = large.eta <= floor ? 0.0 : small.eta / large.eta;
      report.add("response_linearity", family,
                 "{\"delta_small\":" + format_double(deltas[0]) +
                     ",\"delta_large\":" + format_double(deltas[1]) + "}",
                 ratio, std::sqrt(deltas[0] / deltas[1]));
    }
  }
  return report;
}

std::string response_sweep_csv(const ModelBundle& bundle,
                               const SuiteConfig& config) {
  if (config.delta_grid.empty()) {
    throw EmptyGrid("response sweep needs a non-empty delta_grid");
  }
  PerturbationFamily fam = build_family(bundle, config);
  require_admissible(fam, config.delta_grid);
  Observable g = resolve_fg(bundle, fam, config).second;

  std::vector<double> deltas = config.delta_grid;
  std::sort(deltas.begin(), deltas.end(), std::greater<>());
  std::vector<double> etas;
  std::string csv = "delta,eta\n";
  for (double delta : deltas) {
    FiniteDifferenceResponse fd =
        finite_difference_response(fam.base, fam, g, config.response_t, delta,
                                   config.tol);
    etas.push_back(fd.eta);
    csv += format_double(delta);
    csv += ',';
    csv += format_double(fd.eta);
    csv += '\n';
  }
  SlopeFit fit = fit_loglog(deltas, etas, 0.0);
  csv += "slope," + format_double(fit.slope) + "\n";
  return csv;
}

std::string relaxation_scan_csv(const ModelBundle& bundle,
                                const SuiteConfig& config) {
  if (config.s_grid.empty()) {
    throw EmptyGrid("relaxation scan needs a non-empty s_grid");
  }
  PerturbationFamily fam = build_family(bundle, config);
  Observable g = resolve_fg(bundle, fam, config).second;

  Measure nu0 = config.nu0_point.empty()
                    ? Measure::uniform(fam.base.space())
                    : Measure::point(fam.base.space(),
                                     label_index(fam.base.space(),
                                                 config.nu0_point, "nu0_point"));
  double tau = config.tau > 0.0 ? config.tau : config.s_grid.back();
  RelaxationScan scan = near_equilibrium_scan(nu0, fam.base, fam, g, tau,
                                              config.s_grid, config.tol);

  std::string csv = "s,defect\n";
  for (const RelaxationRow& row : scan.rows) {
    csv += format_double(row.s);
    csv += ',';
    csv += format_double(row.defect);
    csv += '\n';
  }
  csv += "slope," + format_double(scan.fit.slope) + "\n";
  csv += "spectral_gap," + format_double(scan.gap) + "\n";
  csv += "rate_ok,";
  csv += scan.rate_ok ? "pass" : "fail";
  csv += '\n';
  return csv;
}

FdtReport green_kubo_report(const ModelBundle& bundle, const SuiteConfig& config) {
  PerturbationFamily fam = build_family(bundle, config);
  auto [f, g] = resolve_fg(bundle, fam, config);

  GreenKuboResult gk =
      green_kubo(fam.base, fam.mu0, f, g, config.green_kubo_t_max, config.tol);
  std::string family = family_kind_name(fam.kind);
  FdtReport report;
  report.add("green_kubo_identity", family, single_param("t_max", gk.horizon),
             gk.identity_residual, config.tol.green_kubo_identity);
  report.add("green_kubo_integral", family, single_param("t_max", gk.horizon),
             gk.relative_residual, config.tol.green_kubo_relative);
  return report;
}

FdtReport mc_report(const ModelBundle& bundle, const SuiteConfig& config,
                    const std::string& out_dir) {
  require_torus(bundle, "the Monte Carlo check");
  const TorusModel& model = *bundle.torus;
  FourierSeries f = resolve_series(bundle, config.f_name, model.f);
  FourierSeries g = resolve_series(bundle, config.g_name, f);

  FdtReport report;

  SimulationRequest req;
  req.n_paths = config.mc.n_paths;
  req.dt = config.mc.dt;
  req.record_times = {config.mc.histogram_time};
  req.seed = config.seed;
  PathEnsemble ensemble = simulate(model, 0.0, req, config.tol);
  std::vector<double> samples(ensemble.n_paths);
  for (int p = 0; p < ensemble.n_paths; ++p) {
    samples[p] = ensemble.positions(p, 0);
  }
  HistogramCheck hist = histogram_vs_gibbs(model, samples, config.mc.bins);
  report.add("mc_histogram", "diffusion",
             single_param("time", ensemble.times[0]), hist.max_abs_z, 3.0);

  McFdtOptions opt;
  opt.n_paths = config.mc.n_paths;
  opt.dt = config.mc.dt;
  opt.seed = config.seed;
  opt.n_grid_oracle = config.mc.n_grid_oracle;
  McFdtResult fdt =
      mc_fdt_check(model, f, g, config.mc.s, config.mc.t, 0.0, opt, config.tol);
  report.add("mc_fdt", "diffusion", pair_params(config.mc.s, config.mc.t),
             fdt.difference, 3.0 * fdt.combined_se);

  if (!config.delta_grid.empty()) {
    double delta = *std::min_element(config.delta_grid.begin(),
                                     config.delta_grid.end());
    McResponseResult resp = mc_finite_difference_response(
        model, g, config.mc.t, delta, opt, config.tol);
    report.add("mc_response", "diffusion", single_param("delta", delta),
               resp.difference, 3.0 * resp.finite_difference.std_error);
  }

  std::filesystem::create_directories(out_dir);
  std::ofstream summary(std::filesystem::path(out_dir) / "ensemble_summary.csv");
  summary << ensemble_summary_csv(ensemble);
  if (!config.mc.paths_file.empty()) {
    write_path_ensemble(
        (std::filesystem::path(out_dir) / config.mc.paths_file).string(),
        ensemble);
  }
  return report;
}

FdtReport discretize_report(const ModelBundle& bundle, const SuiteConfig& config) {
  require_torus(bundle, "the grid-refinement table");
  const TorusModel& model = *bundle.torus;
  FourierSeries g_series = resolve_series(bundle, config.g_name, model.f);
  auto [s, t] = config.st_pairs.front();

  FdtReport report;
  std::vector<double> sizes, tvs, residuals;
  for (int n : config.grid_sizes) {
    double h = kTwoPi / n;
    PerturbationFamily fam = diffusion_grid_family(model, n, config.tol);
    double tv = total_variation(fam.mu0, grid_gibbs(model, n, 0.0));
    report.add("grid_tv", "grid_diffusion", single_param("n_grid", n), tv,
               0.1 * h * h);

    Observable g = Observable::on(fam.base.space(), sampled(g_series, n));
    FdtCheckResult r = fdt_check(fam.base, fam, fam.direction, g, s, t,
                                 config.tol);
    report.add("grid_fdt", "grid_diffusion", single_param("n_grid", n),
               r.dynamic_residual, 0.05 * h * h);

    sizes.push_back(n);
    tvs.push_back(tv);
    residuals.push_back(r.dynamic_residual);
  }

  if (sizes.size() >= 2) {
    SlopeFit tv_fit = fit_loglog(sizes, tvs, 0.0);
    report.add("grid_tv_order", "grid_diffusion", "{}",
               std::abs(-tv_fit.slope - 2.0), 0.3);
    SlopeFit fdt_fit = fit_loglog(sizes, residuals, 0.0);
    report.add("grid_fdt_order", "grid_diffusion", "{}",
               std::abs(-fdt_fit.slope - 2.0), 0.3);
  }
  return report;
}

std::string validate_summary(const ModelBundle& bundle) {
  std::ostringstream out;
  out << "kind: " << model_kind_name(bundle.kind) << "\n";
  switch (bundle.kind) {
    case ModelKind::Rates: {
      const Generator& L = *bundle.generator;
      out << "states: " << L.size() << "\n";
      out << "irreducible: " << (is_irreducible(L) ? "yes" : "no") << "\n";
      if (is_irreducible(L)) {
        Measure mu = invariant_measure(L);
        out << "reversible: " << (is_reversible(L, mu) ? "yes" : "no") << "\n";
        out << "spectral_gap: " << format_double(spectral_gap(L)) << "\n";
      }
      break;
    }
    case ModelKind::Hamiltonian: {
      out << "states: " << bundle.space.size() << "\n";
      out << "edges: " << bundle.graph->edges.size() << "\n";
      out << "connected: " << (bundle.graph->connected() ? "yes" : "no") << "\n";
      break;
    }
    case ModelKind::Cycles: {
      out << "states: " << bundle.space.size() << "\n";
      out << "cycles: " << bundle.cycles.size() << "\n";
      out << "base_measure_normalized: "
          << (bundle.mu0->is_probability(1e-12) ? "yes" : "no") << "\n";
      break;
    }
    case ModelKind::Torus: {
      const TorusModel& m = *bundle.torus;
      out << "potential_order: " << m.H.order() << "\n";
      out << "direction_order: " << m.f.order() << "\n";
      out << "circulation: " << format_double(m.psi) << "\n";
      for (double delta : {0.0, 0.3}) {
        out << "current_residual(delta=" << format_double(delta)
            << "): " << format_double(torus_current_residual(m, delta)) << "\n";
      }
      break;
    }
  }
  int named = bundle.finite_state() ? static_cast<int>(bundle.observables.size())
                                    : static_cast<int>(bundle.torus_observables.size());
  out << "observables: " << named << "\n";
  return out.str();
}

bool write_report_files(const FdtReport& report, const std::string& out_dir,
                        bool reproducible) {
  std::filesystem::create_directories(out_dir);
  std::filesystem::path dir(out_dir);

  std::string csv = report.to_csv();
  if (!reproducible) {
    csv = "# generated " + timestamp_utc() + "\n" + csv;
  }
  std::ofstream csv_file(dir / "report.csv", std::ios::binary);
  csv_file << csv;

  std::string json_text = report.to_json();
  if (!reproducible) {
    auto doc = nlohmann::ordered_json::parse(json_text);
    doc["generated"] = timestamp_utc();
    json_text = doc.dump(2) + "\n";
  }
  std::ofstream json_file(dir / "report.json", std::ios::binary);
  json_file << json_text;

  return report.all_pass();
}

}  // namespace fdtlab
