#include "fdtlab/montecarlo.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <numbers>
#include <sstream>
#include <thread>

#include "fdtlab/report.hpp"
#include "fdtlab/response.hpp"
#include "fdtlab/rng.hpp"
#include "fdtlab/semigroup.hpp"

namespace fdtlab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr std::uint8_t kInitStream = 0;
constexpr std::uint8_t kDynamicsStream = 1;

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("FDT_LAB_THREADS")) {
    int parsed = std::atoi(env);
    if (parsed > 0) return parsed;
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(std::min(hw, 8u));
}

double wrap_position(double x) {
  if (x >= 0.0 && x < kTwoPi) return x;
  x = std::fmod(x, kTwoPi);
  if (x < 0.0) x += kTwoPi;
  return x;
}

/// Piecewise-linear inverse CDF of e^{-H}/Z on a fine grid.
class StationarySampler {
 public:
  explicit StationarySampler(const TorusModel& model, int cells = 4096)
      : cells_(cells), h_(kTwoPi / cells), cdf_(cells + 1, 0.0) {
    double shift = std::numeric_limits<double>::infinity();
    std::vector<double> energy(cells);
    for (int i = 0; i < cells; ++i) {
      energy[i] = model.H.value((i + 0.5) * h_);
      shift = std::min(shift, energy[i]);
    }
    for (int i = 0; i < cells; ++i) {
      cdf_[i + 1] = cdf_[i] + std::exp(-(energy[i] - shift));
    }
    for (double& c : cdf_) c /= cdf_[cells];
  }

  double sample(double u) const {
    auto it = std::lower_bound(cdf_.begin() + 1, cdf_.end(), u);
    int cell = static_cast<int>(it - cdf_.begin()) - 1;
    cell = std::clamp(cell, 0, cells_ - 1);
    double lo = cdf_[cell], hi = cdf_[cell + 1];
    double frac = hi > lo ? (u - lo) / (hi - lo) : 0.5;
    return (cell + frac) * h_;
  }

 private:
  int cells_;
  double h_;
  std::vector<double> cdf_;
};

std::vector<long> snap_to_steps(const std::vector<double>& times, double dt) {
  std::vector<long> steps;
  steps.reserve(times.size());
  for (double t : times) {
    if (!(t >= 0.0)) throw ValidationError("record times must be nonnegative");
    steps.push_back(std::lround(t / dt));
  }
  for (std::size_t i = 1; i < steps.size(); ++i) {
    if (steps[i] <= steps[i - 1]) {
      throw ValidationError(
          "record times must be strictly increasing on the step grid");
    }
  }
  return steps;
}

Vector sample_series_at(const FourierSeries& series, const Vector& xs) {
  Vector out(xs.size());
  for (Eigen::Index i = 0; i < xs.size(); ++i) out(i) = series.value(xs(i));
  return out;
}

/// Coefficient-wise a - scale * b.
FourierSeries series_minus_scaled(const FourierSeries& a, double scale,
                                  const FourierSeries& b) {
  FourierSeries out = a;
  out.a0 -= scale * b.a0;
  out.cos_coeffs.resize(std::max(a.cos_coeffs.size(), b.cos_coeffs.size()), 0.0);
  out.sin_coeffs.resize(std::max(a.sin_coeffs.size(), b.sin_coeffs.size()), 0.0);
  for (std::size_t k = 0; k < b.cos_coeffs.size(); ++k) {
    out.cos_coeffs[k] -= scale * b.cos_coeffs[k];
  }
  for (std::size_t k = 0; k < b.sin_coeffs.size(); ++k) {
    out.sin_coeffs[k] -= scale * b.sin_coeffs[k];
  }
  return out;
}

void append_le_bytes(std::string& out, std::uint64_t bits, int n_bytes) {
  for (int b = 0; b < n_bytes; ++b) {
    out.push_back(static_cast<char>((bits >> (8 * b)) & 0xff));
  }
}

std::uint64_t read_le_bytes(std::istream& in, int n_bytes) {
  std::uint64_t bits = 0;
  for (int b = 0; b < n_bytes; ++b) {
    int c = in.get();
    if (c == EOF) throw ParseError("path file truncated");
    bits |= static_cast<std::uint64_t>(static_cast<unsigned char>(c)) << (8 * b);
  }
  return bits;
}

}  // namespace

PathEnsemble simulate(const TorusModel& model, double delta,
                      const SimulationRequest& request, const Tolerances& tol) {
  if (request.n_paths < 1) throw ValidationError("simulate needs n_paths >= 1");
  if (!(request.dt > 0.0)) throw ValidationError("simulate needs dt > 0");
  if (request.record_times.empty()) {
    throw ValidationError("simulate needs at least one record time");
  }
  if (delta < 0.0) throw ValidationError("perturbation strength must be >= 0");

  double sup_drift = model.drift_sup_norm(delta);
  if (request.dt * sup_drift >= tol.stability_guard) {
    std::ostringstream msg;
    msg << "unstable step: dt * sup|b| = " << request.dt * sup_drift
        << " exceeds the guard " << tol.stability_guard;
    throw UnstableStep(msg.str());
  }

  std::vector<long> snap_steps = snap_to_steps(request.record_times, request.dt);
  const long n_steps = snap_steps.back();
  const int n_snaps = static_cast<int>(snap_steps.size());

  PathEnsemble out;
  out.n_paths = request.n_paths;
  out.dt = request.dt;
  out.seed = request.seed;
  out.times.reserve(n_snaps);
  for (long step : snap_steps) out.times.push_back(step * request.dt);
  out.positions.resize(request.n_paths, n_snaps);
  out.displacements.resize(request.n_paths, n_snaps);

  StationarySampler sampler(model);
  const double noise_scale = std::sqrt(2.0 * request.dt);

  auto run_block = [&](int first, int last) {
    for (int p = first; p < last; ++p) {
      double x;
      if (request.stationary_start) {
        RandomStream init(request.seed, stream_id(p, kInitStream));
        x = sampler.sample(init.uniform());
      } else {
        x = wrap_position(request.start_position);
      }
      double displacement = 0.0;
      RandomStream dyn(request.seed, stream_id(p, kDynamicsStream));

      int next_snap = 0;
      if (snap_steps[0] == 0) {
        out.positions(p, 0) = x;
        out.displacements(p, 0) = 0.0;
        next_snap = 1;
      }
      for (long step = 1; step <= n_steps; ++step) {
        double increment = model.drift(x, delta) * request.dt +
                           noise_scale * dyn.normal();
        x = wrap_position(x + increment);
        displacement += increment;
        if (next_snap < n_snaps && snap_steps[next_snap] == step) {
          out.positions(p, next_snap) = x;
          out.displacements(p, next_snap) = displacement;
          ++next_snap;
        }
      }
    }
  };

  int n_threads = std::min(resolve_threads(request.threads), request.n_paths);
  if (n_threads <= 1) {
    run_block(0, request.n_paths);
  } else {
    std::vector<std::thread> workers;
    int chunk = (request.n_paths + n_threads - 1) / n_threads;
    for (int w = 0; w < n_threads; ++w) {
      int first = w * chunk;
      int last = std::min(request.n_paths, first + chunk);
      if (first >= last) break;
      workers.emplace_back(run_block, first, last);
    }
    for (std::thread& worker : workers) worker.join();
  }
  return out;
}

EstimatorResult mc_mean(const Vector& samples) {
  long n = samples.size();
  if (n < 1) throw ValidationError("mc_mean needs at least one sample");
  double mean = samples.mean();
  double variance = n > 1 ? (samples.array() - mean).square().sum() / (n - 1.0) : 0.0;
  return {mean, std::sqrt(variance / n), n};
}

EstimatorResult mc_covariance(const Vector& a, const Vector& b) {
  long n = a.size();
  if (n < 2) throw ValidationError("mc_covariance needs at least two samples");
  if (b.size() != n) throw ValidationError("mc_covariance needs equal lengths");
  Vector products =
      (a.array() - a.mean()).cwiseProduct(b.array() - b.mean()).matrix();
  double cov = products.sum() / (n - 1.0);
  double spread = (products.array() - products.mean()).square().sum() / (n - 1.0);
  return {cov, std::sqrt(spread / n), n};
}

EstimatorResult MomentAccumulator::estimate() const {
  if (n < 1) throw ValidationError("estimate needs at least one sample");
  double mean = sum / n;
  double variance = n > 1 ? std::max(0.0, (sum_sq - n * mean * mean) / (n - 1.0)) : 0.0;
  return {mean, std::sqrt(variance / n), n};
}

McFdtResult mc_fdt_check(const TorusModel& model, const FourierSeries& f_obs,
                         const FourierSeries& g, double s, double t, double delta,
                         const McFdtOptions& options, const Tolerances& tol) {
  long h_steps = std::max(1l, std::lround(options.half_step / options.dt));
  double h = h_steps * options.dt;
  if (s - h < 0.0) throw BadTimes("mc fdt check needs s >= half_step");
  if (t < s + h) throw BadTimes("mc fdt check needs t >= s + half_step");
  if (delta < 0.0) throw ValidationError("anchor strength must be >= 0");

  // Anchoring at strength delta is a change of potential: the drift at
  // strength delta and its stationary law are those of H - delta f at
  // strength zero.
  TorusModel anchored = model;
  anchored.H = series_minus_scaled(model.H, delta, model.f);
  anchored.f = f_obs;

  SimulationRequest request;
  request.n_paths = options.n_paths;
  request.dt = options.dt;
  request.seed = options.seed;
  request.threads = options.threads;
  request.record_times = {s - h, s + h};
  if (std::lround(t / options.dt) > std::lround((s + h) / options.dt)) {
    request.record_times.push_back(t);
  }
  PathEnsemble ensemble = simulate(anchored, 0.0, request, tol);

  int t_column = static_cast<int>(ensemble.times.size()) - 1;
  Vector f_late = sample_series_at(f_obs, ensemble.positions.col(1));
  Vector f_early = sample_series_at(f_obs, ensemble.positions.col(0));
  Vector quotient = (f_late - f_early) / (2.0 * h);
  Vector g_final = sample_series_at(g, ensemble.positions.col(t_column));

  McFdtResult out;
  out.derivative = mc_covariance(quotient, g_final);

  PerturbationFamily fam =
      diffusion_grid_family(anchored, options.n_grid_oracle, tol);
  Vector g_grid(options.n_grid_oracle);
  for (int i = 0; i < options.n_grid_oracle; ++i) {
    g_grid(i) = g.value(i * kTwoPi / options.n_grid_oracle);
  }
  Vector ghat = semigroup_apply(fam.base, t - s, g_grid, tol);
  out.oracle = expectation(fam.mu0, fam.kernel.apply(ghat));

  out.difference = std::abs(out.derivative.value - out.oracle);
  out.combined_se = out.derivative.std_error;
  out.within_three_se = out.difference <= 3.0 * out.combined_se;
  return out;
}

McResponseResult mc_finite_difference_response(const TorusModel& model,
                                               const FourierSeries& g, double t,
                                               double delta,
                                               const McFdtOptions& options,
                                               const Tolerances& tol) {
  if (!(delta > 0.0)) throw ValidationError("finite difference needs delta > 0");
  if (!(t > 0.0)) throw BadTimes("finite difference needs t > 0");

  SimulationRequest request;
  request.n_paths = options.n_paths;
  request.dt = options.dt;
  request.seed = options.seed;
  request.threads = options.threads;
  request.record_times = {t};

  // Common random numbers: both strengths replay the same seed, hence the
  // same initial positions and Brownian increments.
  PathEnsemble perturbed = simulate(model, delta, request, tol);
  PathEnsemble base = simulate(model, 0.0, request, tol);

  Vector g_perturbed = sample_series_at(g, perturbed.positions.col(0));
  Vector g_base = sample_series_at(g, base.positions.col(0));
  Vector quotient = (g_perturbed - g_base) / delta;

  McResponseResult out;
  out.finite_difference = mc_mean(quotient);

  PerturbationFamily fam = diffusion_grid_family(model, options.n_grid_oracle, tol);
  Vector g_grid(options.n_grid_oracle);
  for (int i = 0; i < options.n_grid_oracle; ++i) {
    g_grid(i) = g.value(i * kTwoPi / options.n_grid_oracle);
  }
  Observable g_obs = Observable::on(fam.base.space(), g_grid);
  Observable integral = response_integral(fam.base, fam, g_obs, t, tol);
  out.oracle = expectation(fam.mu0, integral);

  out.difference = std::abs(out.finite_difference.value - out.oracle);
  out.within_three_se = out.difference <= 3.0 * out.finite_difference.std_error;
  return out;
}

HistogramCheck histogram_vs_gibbs(const TorusModel& model,
                                  const std::vector<double>& samples, int n_bins) {
  if (n_bins < 2) throw ValidationError("histogram needs at least two bins");
  if (samples.empty()) throw ValidationError("histogram needs samples");

  HistogramCheck out;
  out.n_samples = static_cast<long>(samples.size());
  out.counts.assign(n_bins, 0);
  double bin_width = kTwoPi / n_bins;
  for (double x : samples) {
    int bin = static_cast<int>(wrap_position(x) / bin_width);
    bin = std::clamp(bin, 0, n_bins - 1);
    ++out.counts[bin];
  }

  // Cell masses of e^{-H}/Z by midpoint quadrature, 64 points per bin.
  const int sub = 64;
  std::vector<double> mass(n_bins, 0.0);
  double total = 0.0;
  for (int k = 0; k < n_bins; ++k) {
    for (int j = 0; j < sub; ++j) {
      double x = (k + (j + 0.5) / sub) * bin_width;
      mass[k] += std::exp(-model.H.value(x));
    }
    total += mass[k];
  }
  out.expected.resize(n_bins);
  for (int k = 0; k < n_bins; ++k) {
    double p = mass[k] / total;
    out.expected[k] = out.n_samples * p;
    double sd = std::sqrt(out.n_samples * p * (1.0 - p));
    double z = sd > 0.0 ? (out.counts[k] - out.expected[k]) / sd : 0.0;
    out.max_abs_z = std::max(out.max_abs_z, std::abs(z));
  }
  return out;
}

void write_path_ensemble(const std::string& path, const PathEnsemble& ensemble) {
  std::string bytes;
  bytes.reserve(24 + 8 * ensemble.positions.size());
  append_le_bytes(bytes, static_cast<std::uint64_t>(ensemble.n_paths), 8);
  append_le_bytes(bytes, static_cast<std::uint64_t>(ensemble.positions.cols()), 8);
  append_le_bytes(bytes, std::bit_cast<std::uint64_t>(ensemble.dt), 8);
  for (int p = 0; p < ensemble.positions.rows(); ++p) {
    for (int c = 0; c < ensemble.positions.cols(); ++c) {
      append_le_bytes(bytes, std::bit_cast<std::uint64_t>(ensemble.positions(p, c)), 8);
    }
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw Error("cannot open path file for writing: " + path);
  file.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!file) throw Error("failed writing path file: " + path);
}

PathEnsemble read_path_ensemble(const std::string& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) throw Error("cannot open path file: " + path);
  PathEnsemble out;
  out.n_paths = static_cast<int>(read_le_bytes(file, 8));
  long n_steps = static_cast<long>(read_le_bytes(file, 8));
  out.dt = std::bit_cast<double>(read_le_bytes(file, 8));
  if (out.n_paths < 0 || n_steps < 0) throw ParseError("corrupt path file header");
  out.positions.resize(out.n_paths, n_steps);
  for (int p = 0; p < out.n_paths; ++p) {
    for (long c = 0; c < n_steps; ++c) {
      out.positions(p, c) = std::bit_cast<double>(read_le_bytes(file, 8));
    }
  }
  return out;
}

std::string ensemble_summary_csv(const PathEnsemble& ensemble) {
  std::string out = "time,mean_position,mean_displacement,var_displacement,n_paths\n";
  for (std::size_t k = 0; k < ensemble.times.size(); ++k) {
    Vector disp = ensemble.displacements.col(static_cast<int>(k));
    double mean_disp = disp.mean();
    double var = ensemble.n_paths > 1
                     ? (disp.array() - mean_disp).square().sum() /
                           (ensemble.n_paths - 1.0)
                     : 0.0;
    out += format_double(ensemble.times[k]);
    out += ',';
    out += format_double(ensemble.positions.col(static_cast<int>(k)).mean());
    out += ',';
    out += format_double(mean_disp);
    out += ',';
    out += format_double(var);
    out += ',';
    out += std::to_string(ensemble.n_paths);
    out += '\n';
  }
  return out;
}

}  // namespace fdtlab
