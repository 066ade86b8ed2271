#include "fdtlab/semigroup.hpp"

#include <cmath>

namespace fdtlab {

namespace {

double log_poisson_pmf(double rate, long k) {
  return -rate + k * std::log(rate) - std::lgamma(static_cast<double>(k) + 1.0);
}

// Upper bound on log of the Poisson tail mass beyond k, valid for k > rate:
// the pmf terms beyond k are dominated by a geometric series with ratio
// rate/(k+1).
double log_poisson_tail_bound(double rate, long k) {
  double ratio = (k + 1.0) / (k + 1.0 - rate);
  return log_poisson_pmf(rate, k) + std::log(ratio);
}

}  // namespace

Vector poisson_expm_apply(double shift_rate, double t,
                          const std::function<Vector(const Vector&)>& shifted_step,
                          Vector v, double tail_tol, double growth) {
  if (t < 0) throw NegativeTime("negative time in exponential action");
  double w = shift_rate * t;
  if (w == 0.0) return v;

  // Terms are bounded by pois_k(w * growth) * ||v|| up to the constant factor
  // exp(w (growth - 1)); require the effective tail below tail_tol times that.
  double weff = w * growth;
  double log_target = std::log(tail_tol) - w * (growth - 1.0);
  long hard_cap = static_cast<long>(weff + 16.0 * std::sqrt(weff + 1.0) + 400.0);

  Vector sum = Vector::Zero(v.size());
  Vector comp = Vector::Zero(v.size());
  for (long k = 0;; ++k) {
    double wk = std::exp(log_poisson_pmf(w, k));
    if (wk > 0.0) {
      // Kahan-compensated accumulation of wk * v.
      Vector term = wk * v - comp;
      Vector next = sum + term;
      comp = (next - sum) - term;
      sum = std::move(next);
    }
    if (k > weff && log_poisson_tail_bound(weff, k) < log_target) break;
    if (k >= hard_cap) break;
    v = shifted_step(v);
  }
  return sum;
}

Vector semigroup_apply(const Generator& L, double t, const Vector& g,
                       const Tolerances& tol) {
  if (t < 0) throw NegativeTime("negative time in semigroup_apply");
  if (g.size() != L.size()) throw ValidationError("semigroup_apply: length mismatch");
  double lambda = L.uniformization_rate();
  if (lambda == 0.0 || t == 0.0) return g;
  // P = I + L/lambda is stochastic; its powers contract the sup norm.
  Matrix P = Matrix::Identity(L.size(), L.size()) + L.matrix() / lambda;
  auto step = [&P](const Vector& v) -> Vector { return P * v; };
  return poisson_expm_apply(lambda, t, step, g, tol.semigroup_tail, 1.0);
}

Observable semigroup_apply(const Generator& L, double t, const Observable& g,
                           const Tolerances& tol) {
  require_same_space(L.space(), g.space, "semigroup_apply");
  return Observable{g.space, semigroup_apply(L, t, g.values, tol)};
}

}  // namespace fdtlab
