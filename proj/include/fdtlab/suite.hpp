#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fdtlab/model_io.hpp"
#include "fdtlab/report.hpp"

namespace fdtlab {

/// Adds `add` to one off-diagonal kernel entry after the family is built
/// (fault injection for report pipelines).
struct KernelOverride {
  std::string from;
  std::string to;
  double add = 0.0;
};

struct McSettings {
  int n_paths = 20000;
  double dt = 1e-3;
  double s = 0.5;               // covariance-derivative check times
  double t = 1.5;
  double histogram_time = 2.0;  // snapshot used for the density check
  int bins = 64;
  int n_grid_oracle = 512;
  std::string paths_file;      // optional raw-path dump, relative to out dir
};

/// One batch-run description: which family to build on the model, which
/// observables to check, and the grids every subcommand draws from.
struct SuiteConfig {
  std::string family = "time_change";
  std::string direction;            // observable name for the kick direction
  std::string f_name;               // check observables; default: direction
  std::string g_name;
  std::vector<std::pair<double, double>> st_pairs = {
      {0.1, 1.0}, {0.5, 2.0}, {1.0, 1.5}};
  std::vector<double> delta_grid;   // finite-strength sweep
  double response_t = 1.0;          // observation time for the sweep
  std::vector<double> s_grid;       // relaxation scan grid
  double tau = 0.0;                 // scan horizon; 0 = last grid point
  std::string nu0_point;            // label for a point-mass start; "" = uniform
  double green_kubo_t_max = 0.0;    // 0 = automatic horizon
  int n_grid = 256;                 // torus: working grid resolution
  std::vector<int> grid_sizes = {64, 128, 256};
  std::uint64_t seed = 1;
  std::optional<KernelOverride> kernel_override;
  McSettings mc;
  Tolerances tol;
};

SuiteConfig parse_suite_config(const std::string& text,
                               const std::string& origin = "<memory>");
SuiteConfig load_suite_config(const std::string& path);

/// Applies "name=value[,name=value...]" through set_tolerance.
void apply_tolerance_overrides(Tolerances& tol, const std::string& spec);

/// Builds the configured perturbation family on the model (and applies any
/// kernel override). Family kinds pair with model kinds: time_change /
/// langevin / general_b need explicit rates, metropolis / glauber an energy
/// graph, cycle a cycle list, grid_diffusion a torus.
PerturbationFamily build_family(const ModelBundle& bundle,
                                const SuiteConfig& config);

/// The batch verdict table: dissipation identity at every (s, t), the static
/// identity, kernel symmetry and the stationary-correlation identity on
/// reversible bases, and the finite-strength response residual when a
/// strength grid is configured. Finite-state models only.
FdtReport run_suite(const ModelBundle& bundle, const SuiteConfig& config);

/// (delta, eta) rows plus a fitted-slope footer. Throws EmptyGrid.
std::string response_sweep_csv(const ModelBundle& bundle,
                               const SuiteConfig& config);

/// (s, defect) rows plus fitted-rate / gap / verdict footers. Throws EmptyGrid.
std::string relaxation_scan_csv(const ModelBundle& bundle,
                                const SuiteConfig& config);

/// Stationary-correlation identity rows (reversible finite-state models).
FdtReport green_kubo_report(const ModelBundle& bundle, const SuiteConfig& config);

/// Statistical checks on a torus model: stationary histogram, sampled
/// covariance derivative vs the ring-chain response, and (when a strength
/// grid is configured) the finite-strength kick. Writes the ensemble summary
/// and any requested raw-path file into out_dir.
FdtReport mc_report(const ModelBundle& bundle, const SuiteConfig& config,
                    const std::string& out_dir);

/// Grid-refinement table on a torus model: invariant-measure distance and
/// discretized-kernel identity residual per resolution, plus order-two
/// convergence verdicts.
FdtReport discretize_report(const ModelBundle& bundle, const SuiteConfig& config);

/// Human-readable structural summary (the `validate` subcommand body).
std::string validate_summary(const ModelBundle& bundle);

/// Writes report.csv and report.json into out_dir (created if needed). The
/// files carry a generation timestamp unless reproducible is set, in which
/// case identical runs are byte-identical. Returns report.all_pass().
bool write_report_files(const FdtReport& report, const std::string& out_dir,
                        bool reproducible);

}  // namespace fdtlab
