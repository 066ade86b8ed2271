// Command-line front end: loads a model (and optional run config), builds the
// requested perturbation family, runs the selected check, and writes reports.
//
// Exit codes: 0 when every check passes, 1 when a check fails, 2 for usage,
// parse, or validation problems.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "fdtlab/errors.hpp"
#include "fdtlab/model_io.hpp"
#include "fdtlab/report.hpp"
#include "fdtlab/suite.hpp"

namespace {

int report_exit(const fdtlab::FdtReport& report, const std::string& out_dir,
                bool reproducible) {
  bool ok = fdtlab::write_report_files(report, out_dir, reproducible);
  std::cout << report.to_csv();
  if (ok) {
    std::cout << "all " << report.records.size() << " checks passed\n";
  } else {
    std::cout << report.fail_count() << " of " << report.records.size()
              << " checks failed\n";
  }
  return ok ? 0 : 1;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream file(path, std::ios::binary);
  if (!file) throw fdtlab::Error("cannot write " + path.string());
  file << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "fdtlab: response-theory checks for finite-state chains and a ring "
      "diffusion"};
  app.require_subcommand(1);

  std::string model_path;
  std::string config_path;
  std::string out_dir = ".";
  std::string tol_spec;
  std::uint64_t seed = 0;
  bool reproducible = false;

  app.add_option("--model", model_path, "model JSON file")->required();
  app.add_option("--config", config_path, "run config JSON file");
  app.add_option("--out-dir", out_dir, "directory for generated files");
  CLI::Option* seed_opt =
      app.add_option("--seed", seed, "override the config seed");
  app.add_flag("--reproducible", reproducible,
               "omit timestamps so repeated runs are byte-identical");
  app.add_option("--tol-overrides", tol_spec,
                 "comma-separated name=value tolerance overrides");

  CLI::App* validate =
      app.add_subcommand("validate", "print a structural summary of the model");
  CLI::App* fdt = app.add_subcommand(
      "fdt", "run the dissipation-identity suite and write report files");
  CLI::App* sweep = app.add_subcommand(
      "response-sweep", "finite-strength error sweep with a fitted slope");
  CLI::App* relax = app.add_subcommand(
      "relax-scan", "near-equilibrium relaxation scan from a non-stationary start");
  CLI::App* green = app.add_subcommand(
      "green-kubo", "stationary correlation-integral identity report");
  CLI::App* mc = app.add_subcommand(
      "mc", "Monte Carlo checks for a torus model (histogram + response)");
  CLI::App* disc = app.add_subcommand(
      "discretize", "grid-refinement report for a torus model");
  for (CLI::App* sub : {validate, fdt, sweep, relax, green, mc, disc}) {
    sub->fallthrough();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    fdtlab::ModelBundle bundle = fdtlab::load_model(model_path);
    fdtlab::SuiteConfig config;
    if (!config_path.empty()) config = fdtlab::load_suite_config(config_path);
    if (seed_opt->count() > 0) config.seed = seed;
    if (!tol_spec.empty()) fdtlab::apply_tolerance_overrides(config.tol, tol_spec);

    if (validate->parsed()) {
      std::cout << fdtlab::validate_summary(bundle);
      return 0;
    }
    if (fdt->parsed()) {
      return report_exit(fdtlab::run_suite(bundle, config), out_dir, reproducible);
    }
    if (sweep->parsed()) {
      std::string csv = fdtlab::response_sweep_csv(bundle, config);
      std::filesystem::create_directories(out_dir);
      write_text(std::filesystem::path(out_dir) / "response_sweep.csv", csv);
      std::cout << csv;
      return 0;
    }
    if (relax->parsed()) {
      std::string csv = fdtlab::relaxation_scan_csv(bundle, config);
      std::filesystem::create_directories(out_dir);
      write_text(std::filesystem::path(out_dir) / "relax_scan.csv", csv);
      std::cout << csv;
      return csv.find("rate_ok,pass") != std::string::npos ? 0 : 1;
    }
    if (green->parsed()) {
      return report_exit(fdtlab::green_kubo_report(bundle, config), out_dir,
                         reproducible);
    }
    if (mc->parsed()) {
      return report_exit(fdtlab::mc_report(bundle, config, out_dir), out_dir,
                         reproducible);
    }
    if (disc->parsed()) {
      return report_exit(fdtlab::discretize_report(bundle, config), out_dir,
                         reproducible);
    }
    std::cerr << "error: no subcommand selected\n";
    return 2;
  } catch (const fdtlab::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 2;
  }
}
