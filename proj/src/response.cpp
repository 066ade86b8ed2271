#include "fdtlab/response.hpp"

#include <cmath>

namespace fdtlab {

namespace {

void check_response_spaces(const Generator& L, const PerturbationFamily& fam,
                           const Observable& g) {
  require_same_space(L.space(), fam.base.space(), "response");
  require_same_space(L.space(), g.space, "response");
}

double family_norm(const PerturbationFamily& fam, const Vector& v) {
  return fam.kind == FamilyKind::Langevin ? l2_norm(fam.mu0, v) : sup_norm(v);
}

}  // namespace

Observable response_function(const Generator& L, const PerturbationFamily& fam,
                             const Observable& g, double s, double t,
                             const Tolerances& tol) {
  check_response_spaces(L, fam, g);
  if (s < 0.0 || t < 0.0 || s > t)
    throw BadTimes("response_function needs 0 <= s <= t");
  Vector inner = semigroup_apply(L, t - s, g.values, tol);
  Vector kicked = fam.kernel.apply(inner);
  return Observable::on(L.space(), semigroup_apply(L, s, kicked, tol));
}

Observable response_integral(const Generator& L, const PerturbationFamily& fam,
                             const Observable& ghat, double t, const Tolerances& tol) {
  check_response_spaces(L, fam, ghat);
  if (t < 0.0) throw BadTimes("response_integral needs t >= 0");
  int n = L.size();
  if (t == 0.0) return Observable::constant(L.space(), 0.0);

  // exp([[L, A], [0, L]] t) applied to [0; ghat] carries the convolution
  // integral in its top half and P_t ghat in its bottom half.
  double kernel_norm = fam.kernel.sup_operator_norm();
  double shift = std::max(L.uniformization_rate(), kernel_norm);
  if (shift == 0.0) return Observable::constant(L.space(), 0.0);
  double growth = 1.0 + kernel_norm / shift;

  const Matrix& lm = L.matrix();
  const Matrix& am = fam.kernel.matrix();
  auto step = [&](const Vector& uv) {
    Vector out(2 * n);
    out.head(n) = uv.head(n) + (lm * uv.head(n) + am * uv.tail(n)) / shift;
    out.tail(n) = uv.tail(n) + lm * uv.tail(n) / shift;
    return out;
  };

  Vector uv = Vector::Zero(2 * n);
  uv.tail(n) = ghat.values;
  Vector result = poisson_expm_apply(shift, t, step, std::move(uv),
                                     tol.semigroup_tail, growth);
  return Observable::on(L.space(), result.head(n));
}

Observable response_integral_simpson(const Generator& L, const PerturbationFamily& fam,
                                     const Observable& ghat, double t, int panels,
                                     const Tolerances& tol) {
  check_response_spaces(L, fam, ghat);
  if (t < 0.0) throw BadTimes("response_integral_simpson needs t >= 0");
  if (panels < 2 || panels % 2 != 0)
    throw ValidationError("Simpson quadrature needs an even panel count >= 2");
  if (t == 0.0) return Observable::constant(L.space(), 0.0);

  double h = t / panels;
  Vector acc = Vector::Zero(L.size());
  for (int i = 0; i <= panels; ++i) {
    double s = (i == panels) ? t : i * h;
    double weight = (i == 0 || i == panels) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
    acc += weight * response_function(L, fam, ghat, s, t, tol).values;
  }
  return Observable::on(L.space(), (h / 3.0) * acc);
}

FiniteDifferenceResponse finite_difference_response(const Generator& L,
                                                    const PerturbationFamily& fam,
                                                    const Observable& ghat, double t,
                                                    double delta, const Tolerances& tol) {
  check_response_spaces(L, fam, ghat);
  if (t <= 0.0) throw BadTimes("finite_difference_response needs t > 0");
  if (delta <= 0.0)
    throw ValidationError("finite_difference_response needs delta > 0");

  Generator pert = fam.generator_at(delta);
  Vector perturbed = semigroup_apply(pert, t, ghat.values, tol);
  Vector unperturbed = semigroup_apply(L, t, ghat.values, tol);
  Vector quotient = (perturbed - unperturbed) / delta;
  Vector integral = response_integral(L, fam, ghat, t, tol).values;
  Vector diff = quotient - integral;

  FiniteDifferenceResponse out;
  out.difference_quotient = Observable::on(L.space(), std::move(quotient));
  out.eta_sup = sup_norm(diff) / t;
  out.eta_l2 = l2_norm(fam.mu0, diff) / t;
  out.eta = fam.kind == FamilyKind::Langevin ? out.eta_l2 : out.eta_sup;
  return out;
}

double windowed_response_check(const Generator& L, const PerturbationFamily& fam,
                               const Observable& g, double a, double b, double t,
                               double delta, const Tolerances& tol) {
  check_response_spaces(L, fam, g);
  if (a < 0.0 || b < 0.0 || t < 0.0)
    throw BadTimes("windowed_response_check needs a, b, t >= 0");
  if (delta <= 0.0) throw ValidationError("windowed_response_check needs delta > 0");
  if (t == 0.0) return 0.0;

  Vector settled = semigroup_apply(L, b, g.values, tol);
  Observable gb = Observable::on(L.space(), settled);

  Generator pert = fam.generator_at(delta);
  Vector kicked = semigroup_apply(pert, t, gb.values, tol);
  Vector free_run = semigroup_apply(L, t, gb.values, tol);
  Vector lhs = semigroup_apply(L, a, ((kicked - free_run) / delta).eval(), tol);

  // int_a^{a+t} P_u A P_{a+t+b-u} g du = P_a int_0^t P_s A P_{t-s} (P_b g) ds.
  Vector rhs =
      semigroup_apply(L, a, response_integral(L, fam, gb, t, tol).values, tol);

  return family_norm(fam, lhs - rhs) / t;
}

KernelConvergenceReport kernel_norm_convergence(const PerturbationFamily& fam,
                                                const std::vector<double>& deltas) {
  KernelConvergenceReport report;
  const Matrix& base = fam.base.matrix();
  const Matrix& kernel = fam.kernel.matrix();
  std::vector<double> xs, ys;
  for (double delta : deltas) {
    if (delta <= 0.0)
      throw ValidationError("kernel_norm_convergence needs strictly positive strengths");
    Matrix diff = (fam.generator_at(delta).matrix() - base) / delta - kernel;
    double residual = diff.cwiseAbs().rowwise().sum().maxCoeff();
    report.rows.push_back({delta, residual});
    xs.push_back(delta);
    ys.push_back(residual);
  }
  report.fit = fit_loglog(xs, ys, 1e-13);
  return report;
}

}  // namespace fdtlab
