#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fdtlab/torus.hpp"

namespace fdtlab {

/// Euler-Maruyama ensemble specification. Positions are recorded at
/// record_times snapped to the step grid; the snapped values are reported
/// back in PathEnsemble::times.
struct SimulationRequest {
  int n_paths = 0;
  double dt = 1e-3;
  std::vector<double> record_times;
  std::uint64_t seed = 0;
  int threads = 0;                // 0: FDT_LAB_THREADS, else hardware count
  bool stationary_start = true;   // X0 ~ e^{-H}/Z by inverse CDF
  double start_position = 0.0;    // used when stationary_start is false
};

/// Snapshots of an ensemble of torus paths. positions are wrapped to
/// [0, 2pi); displacements accumulate the unwrapped increments X_t - X_0.
struct PathEnsemble {
  int n_paths = 0;
  double dt = 0.0;
  std::uint64_t seed = 0;
  std::vector<double> times;
  Matrix positions;      // n_paths x times.size()
  Matrix displacements;  // n_paths x times.size()
};

struct EstimatorResult {
  double value = 0.0;
  double std_error = 0.0;
  long n_effective = 0;
};

/// Simulates dX = b_delta(X) dt + sqrt(2 dt) N(0,1) with positions wrapped
/// mod 2pi. Identical seed and parameters give bit-identical ensembles for
/// any thread count. Throws UnstableStep when dt * sup|b_delta| exceeds the
/// stability guard.
PathEnsemble simulate(const TorusModel& model, double delta,
                      const SimulationRequest& request,
                      const Tolerances& tol = default_tolerances());

/// Sample mean with standard error sd / sqrt(n).
EstimatorResult mc_mean(const Vector& samples);
/// Sample covariance (1/(n-1)) sum (a_i - abar)(b_i - bbar), with the
/// standard error of the product terms as its uncertainty.
EstimatorResult mc_covariance(const Vector& a, const Vector& b);

/// Running first and second moments. Worker blocks accumulate independently
/// and merge by summing moments, so the reduction is associative.
struct MomentAccumulator {
  long n = 0;
  double sum = 0.0;
  double sum_sq = 0.0;

  void add(double x) {
    ++n;
    sum += x;
    sum_sq += x * x;
  }
  MomentAccumulator merged(const MomentAccumulator& other) const {
    return {n + other.n, sum + other.sum, sum_sq + other.sum_sq};
  }
  EstimatorResult estimate() const;
};

struct McFdtOptions {
  int n_paths = 20000;
  double dt = 1e-3;
  std::uint64_t seed = 1;
  double half_step = 0.05;   // central-difference half-step in s
  int n_grid_oracle = 512;   // grid chain supplying the exact side
  int threads = 0;
};

/// Monte Carlo fluctuation-dissipation check for the diffusion: the central
/// difference of the stationary covariance K(s,t) in s, estimated from
/// correlated path samples, against the grid-chain value of
/// <A_f P_{t-s} g>_{mu0}. Agreement is statistical: |difference| within
/// three combined standard errors. delta anchors the check at the tilted
/// dynamics: the potential is replaced by H - delta f before running, which
/// realizes the drift at strength delta together with its stationary law.
struct McFdtResult {
  EstimatorResult derivative;
  double oracle = 0.0;
  double difference = 0.0;
  double combined_se = 0.0;
  bool within_three_se = false;
};

McFdtResult mc_fdt_check(const TorusModel& model, const FourierSeries& f_obs,
                         const FourierSeries& g, double s, double t, double delta,
                         const McFdtOptions& options,
                         const Tolerances& tol = default_tolerances());

/// Finite-strength response estimate delta^{-1}(E^delta[g(X_t)] - E^0[g(X_t)])
/// using common random numbers across the two strengths, against the
/// grid-chain response integral int_0^t <R(u,t)>_{mu0} du.
struct McResponseResult {
  EstimatorResult finite_difference;
  double oracle = 0.0;
  double difference = 0.0;
  bool within_three_se = false;
};

McResponseResult mc_finite_difference_response(const TorusModel& model,
                                               const FourierSeries& g, double t,
                                               double delta,
                                               const McFdtOptions& options,
                                               const Tolerances& tol = default_tolerances());

/// Bins samples over [0, 2pi) and compares with the Gibbs cell masses of
/// e^{-H}/Z: z_k = (count_k - N p_k) / sqrt(N p_k (1 - p_k)).
struct HistogramCheck {
  std::vector<long> counts;
  std::vector<double> expected;  // N p_k
  double max_abs_z = 0.0;
  long n_samples = 0;
};

HistogramCheck histogram_vs_gibbs(const TorusModel& model,
                                  const std::vector<double>& samples, int n_bins);

/// Flat little-endian snapshot file: header {n_paths: int64, n_steps: int64,
/// dt: double}, then the positions matrix row-major (path by path). Record
/// times are not stored; keep them with the run configuration.
void write_path_ensemble(const std::string& path, const PathEnsemble& ensemble);
PathEnsemble read_path_ensemble(const std::string& path);

/// Per-snapshot summary table: time, mean position, mean displacement,
/// displacement variance, n_paths.
std::string ensemble_summary_csv(const PathEnsemble& ensemble);

}  // namespace fdtlab
