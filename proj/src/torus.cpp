#include "fdtlab/torus.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "fdtlab/markov_ops.hpp"

namespace fdtlab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

StateSpace grid_space(int n_grid) {
  std::vector<std::string> labels;
  labels.reserve(n_grid);
  for (int i = 0; i < n_grid; ++i) {
    labels.push_back("x" + std::to_string(i));
  }
  return StateSpace::with_labels(std::move(labels));
}

Vector sample_series(const FourierSeries& series, int n_grid) {
  Vector out(n_grid);
  double h = kTwoPi / n_grid;
  for (int i = 0; i < n_grid; ++i) out(i) = series.value(i * h);
  return out;
}

}  // namespace

double FourierSeries::value(double x) const {
  double out = a0;
  for (std::size_t k = 0; k < cos_coeffs.size(); ++k) {
    out += cos_coeffs[k] * std::cos((k + 1.0) * x);
  }
  for (std::size_t k = 0; k < sin_coeffs.size(); ++k) {
    out += sin_coeffs[k] * std::sin((k + 1.0) * x);
  }
  return out;
}

double FourierSeries::derivative(double x) const {
  double out = 0.0;
  for (std::size_t k = 0; k < cos_coeffs.size(); ++k) {
    out -= cos_coeffs[k] * (k + 1.0) * std::sin((k + 1.0) * x);
  }
  for (std::size_t k = 0; k < sin_coeffs.size(); ++k) {
    out += sin_coeffs[k] * (k + 1.0) * std::cos((k + 1.0) * x);
  }
  return out;
}

FourierSeries FourierSeries::derivative_series() const {
  FourierSeries out;
  std::size_t n = std::max(cos_coeffs.size(), sin_coeffs.size());
  out.cos_coeffs.assign(n, 0.0);
  out.sin_coeffs.assign(n, 0.0);
  for (std::size_t k = 0; k < sin_coeffs.size(); ++k) {
    out.cos_coeffs[k] = (k + 1.0) * sin_coeffs[k];
  }
  for (std::size_t k = 0; k < cos_coeffs.size(); ++k) {
    out.sin_coeffs[k] = -(k + 1.0) * cos_coeffs[k];
  }
  return out;
}

int FourierSeries::order() const {
  return static_cast<int>(std::max(cos_coeffs.size(), sin_coeffs.size()));
}

FourierSeries FourierSeries::constant(double value) {
  FourierSeries out;
  out.a0 = value;
  return out;
}

FourierSeries FourierSeries::harmonic(double cos_amp, double sin_amp, int k) {
  if (k < 1) throw ValidationError("harmonic index must be >= 1");
  FourierSeries out;
  out.cos_coeffs.assign(k, 0.0);
  out.sin_coeffs.assign(k, 0.0);
  out.cos_coeffs[k - 1] = cos_amp;
  out.sin_coeffs[k - 1] = sin_amp;
  return out;
}

double TorusModel::drift(double x, double delta) const {
  double tilt = H.value(x) - delta * f.value(x);
  return -H.derivative(x) + delta * f.derivative(x) + psi * std::exp(tilt);
}

double TorusModel::response_coefficient(double x) const {
  return f.derivative(x) - f.value(x) * psi * std::exp(H.value(x));
}

double TorusModel::drift_sup_norm(double delta, int n_check) const {
  double sup = 0.0;
  for (int i = 0; i < n_check; ++i) {
    sup = std::max(sup, std::abs(drift(i * kTwoPi / n_check, delta)));
  }
  return sup;
}

double torus_current_residual(const TorusModel& model, double delta, int n_check) {
  // mu_delta = e^{-(H - delta f)} / Z with exact derivative; the stationary
  // current J = b mu - mu' should be the constant psi / Z.
  double z = 0.0;
  double h = kTwoPi / n_check;
  std::vector<double> current(n_check);
  for (int i = 0; i < n_check; ++i) {
    double x = i * h;
    double tilt = model.H.value(x) - delta * model.f.value(x);
    double mu = std::exp(-tilt);
    double mu_prime =
        -(model.H.derivative(x) - delta * model.f.derivative(x)) * mu;
    current[i] = model.drift(x, delta) * mu - mu_prime;
    z += mu * h;
  }
  double mean = 0.0;
  for (double j : current) mean += j;
  mean /= n_check;
  double residual = 0.0;
  for (double j : current) residual = std::max(residual, std::abs(j - mean));
  // Normalize by Z so the residual is measured on the probability current.
  return residual / z;
}

Measure grid_gibbs(const TorusModel& model, int n_grid, double delta) {
  if (n_grid < 2) throw ValidationError("grid_gibbs needs at least two nodes");
  StateSpace space = grid_space(n_grid);
  Vector w(n_grid);
  double h = kTwoPi / n_grid;
  double shift = std::numeric_limits<double>::infinity();
  std::vector<double> tilt(n_grid);
  for (int i = 0; i < n_grid; ++i) {
    tilt[i] = model.H.value(i * h) - delta * model.f.value(i * h);
    shift = std::min(shift, tilt[i]);
  }
  for (int i = 0; i < n_grid; ++i) w(i) = std::exp(-(tilt[i] - shift));
  w /= w.sum();
  Measure out = Measure::on(space, w);
  out.normalized = true;
  return out;
}

Generator grid_discretize(const TorusModel& model, int n_grid, double delta,
                          const Tolerances& tol) {
  (void)tol;
  if (n_grid < 64) {
    throw ValidationError("grid_discretize needs n_grid >= 64");
  }
  StateSpace space = grid_space(n_grid);
  double h = kTwoPi / n_grid;
  Matrix rates = Matrix::Zero(n_grid, n_grid);
  for (int i = 0; i < n_grid; ++i) {
    double b = model.drift(i * h, delta);
    double up = 1.0 / (h * h) + b / (2.0 * h);
    double down = 1.0 / (h * h) - b / (2.0 * h);
    if (up < 0.0 || down < 0.0) {
      std::ostringstream msg;
      msg << "grid too coarse at node " << i << ": |drift| " << std::abs(b)
          << " exceeds 2/h = " << 2.0 / h;
      throw RateNegative(msg.str());
    }
    rates(i, (i + 1) % n_grid) = up;
    rates(i, (i - 1 + n_grid) % n_grid) = down;
  }
  return Generator::from_offdiagonal(space, std::move(rates));
}

PerturbationFamily diffusion_grid_family(const TorusModel& model, int n_grid,
                                         const Tolerances& tol) {
  Generator base = grid_discretize(model, n_grid, 0.0, tol);
  Measure mu0 = invariant_measure(base, tol);
  double h = kTwoPi / n_grid;

  Matrix kernel = Matrix::Zero(n_grid, n_grid);
  for (int i = 0; i < n_grid; ++i) {
    double coeff = model.response_coefficient(i * h);
    kernel(i, (i + 1) % n_grid) = coeff / (2.0 * h);
    kernel(i, (i - 1 + n_grid) % n_grid) = -coeff / (2.0 * h);
  }

  PerturbationFamily fam;
  fam.kind = FamilyKind::GridDiffusion;
  fam.base = base;
  fam.mu0 = mu0;
  fam.direction = Observable::on(base.space(), sample_series(model.f, n_grid));
  fam.kernel = ResponseKernel::from_offdiagonal(base.space(), std::move(kernel));
  fam.offdiag_rates_at = [model, n_grid, tol](double delta) {
    return grid_discretize(model, n_grid, delta, tol).matrix();
  };
  return fam;
}

double total_variation(const Measure& p, const Measure& q) {
  require_same_space(p.space, q.space, "total variation");
  Vector a = p.weights / p.total();
  Vector b = q.weights / q.total();
  return 0.5 * (a - b).cwiseAbs().sum();
}

double drift_energy_ratio(const TorusModel& model, const FourierSeries& g,
                          int n_grid) {
  double h = kTwoPi / n_grid;
  double num = 0.0, den = 0.0;
  for (int i = 0; i < n_grid; ++i) {
    double x = i * h;
    double mu = std::exp(-model.H.value(x));
    double gp = g.derivative(x);
    double drifted = model.psi * std::exp(model.H.value(x)) * gp;
    num += drifted * drifted * mu;
    den += gp * gp * mu;
  }
  if (den == 0.0) {
    throw ValidationError("drift energy ratio needs a non-constant observable");
  }
  return num / den;
}

}  // namespace fdtlab
