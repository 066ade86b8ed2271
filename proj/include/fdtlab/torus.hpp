#pragma once

#include <vector>

#include "fdtlab/family.hpp"
#include "fdtlab/generator.hpp"

namespace fdtlab {

/// Real trigonometric polynomial on the circle [0, 2pi):
///   value(x) = a0 + sum_{k=1..K} (cos_coeffs[k-1] cos kx + sin_coeffs[k-1] sin kx).
/// Derivatives are exact, so drifts and response coefficients built from these
/// series involve no numerical differentiation.
struct FourierSeries {
  double a0 = 0.0;
  std::vector<double> cos_coeffs;
  std::vector<double> sin_coeffs;

  double value(double x) const;
  double derivative(double x) const;
  FourierSeries derivative_series() const;
  int order() const;

  static FourierSeries constant(double value);
  static FourierSeries harmonic(double cos_amp, double sin_amp, int k);
};

/// Overdamped diffusion dX = b_delta(X) dt + sqrt(2) dW on the circle with
///   b_delta(x) = -H'(x) + delta f'(x) + psi e^{H(x) - delta f(x)}.
/// Every delta >= 0 keeps e^{-(H - delta f)} / Z invariant; psi adds a
/// divergence-free (non-reversible) drift around the circle. The response
/// operator acting on g is A_f g = (f' - f psi e^{H}) g'.
struct TorusModel {
  FourierSeries H;
  FourierSeries f;
  double psi = 0.0;

  double drift(double x, double delta) const;
  /// Coefficient of g' in A_f g.
  double response_coefficient(double x) const;
  double drift_sup_norm(double delta, int n_check = 4096) const;
};

/// Stationary probability current J = b mu - mu' of the unperturbed model,
/// evaluated with exact derivatives on n_check points; returns
/// max_x |J(x) - mean(J)| (zero for a well-formed drift, since J = psi / Z).
double torus_current_residual(const TorusModel& model, double delta, int n_check = 512);

/// Grid-sampled Gibbs weights e^{-(H - delta f)(x_i)} at the n_grid nodes
/// x_i = i h, normalized to a probability.
Measure grid_gibbs(const TorusModel& model, int n_grid, double delta);

/// Birth-death ring chain approximating the diffusion at strength delta:
///   c(x, x+-1) = 1/h^2 +- b_delta(x) / (2h),  h = 2pi / n_grid.
/// States are the nodes x_i = i h. Requires n_grid >= 64 and rates
/// nonnegative (RateNegative otherwise).
Generator grid_discretize(const TorusModel& model, int n_grid, double delta,
                          const Tolerances& tol = default_tolerances());

/// The grid chains packaged as a perturbation family: base chain at delta 0,
/// its exact invariant measure, the grid-sampled direction f, and the
/// central-difference response kernel
///   (A g)(x_i) = (f'(x_i) - f(x_i) psi e^{H(x_i)}) (g_{i+1} - g_{i-1}) / (2h),
/// which is the exact delta-derivative of the grid rates. Unlike the
/// finite-state constructors this family preserves e^{delta f} mu0 only to
/// O(h^2), so it is built without the invariance precheck.
PerturbationFamily diffusion_grid_family(const TorusModel& model, int n_grid,
                                         const Tolerances& tol = default_tolerances());

/// Total-variation distance (1/2) sum |p - q| between two normalized measures
/// on the same space.
double total_variation(const Measure& p, const Measure& q);

/// Diagnostic ratio int |psi e^{H} g'|^2 dmu0 / int |g'|^2 dmu0 of the
/// non-symmetric drift energy to the Dirichlet energy, by grid quadrature.
/// Reported as-is; finiteness is the only claim.
double drift_energy_ratio(const TorusModel& model, const FourierSeries& g,
                          int n_grid = 512);

}  // namespace fdtlab
