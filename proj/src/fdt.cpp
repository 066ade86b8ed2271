#include "fdtlab/fdt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "fdtlab/semigroup.hpp"

namespace fdtlab {

namespace {

void check_covariance_inputs(const Measure& nu, const Generator& L, const Observable& f,
                             const Observable& g, double s, double t,
                             const Tolerances& tol) {
  require_same_space(nu.space, L.space(), "covariance initial measure");
  require_same_space(f.space, L.space(), "covariance first observable");
  require_same_space(g.space, L.space(), "covariance second observable");
  if (!(s >= 0.0) || !(t >= s)) {
    std::ostringstream msg;
    msg << "covariance needs 0 <= s <= t, got s=" << s << " t=" << t;
    throw BadTimes(msg.str());
  }
  if (!nu.is_probability(tol.measure_normalization)) {
    throw UnnormalizedInitial(
        "covariance initial measure must be a probability (nonnegative, total 1)");
  }
}

void check_direction(const PerturbationFamily& fam, const Observable& f,
                     const char* what) {
  require_same_space(f.space, fam.base.space(), what);
  if ((f.values - fam.direction.values).cwiseAbs().maxCoeff() != 0.0) {
    std::ostringstream msg;
    msg << what << ": observable f must be the family's perturbation direction";
    throw DirectionMismatch(msg.str());
  }
}

double general_mode_derivative(const Measure& nu, const Generator& L,
                               const Observable& f, const Observable& g, double s,
                               double t, const Tolerances& tol) {
  Vector ghat = semigroup_apply(L, t - s, g.values, tol);
  Vector fg = f.values.cwiseProduct(ghat);
  double first = expectation(nu, semigroup_apply(L, s, L.apply(fg), tol));
  Vector lg_flow = semigroup_apply(L, t - s, L.apply(g.values), tol);
  double second =
      expectation(nu, semigroup_apply(L, s, f.values.cwiseProduct(lg_flow).eval(), tol));
  double drift = expectation(nu, semigroup_apply(L, s, L.apply(f.values), tol));
  double mean_g = expectation(nu, semigroup_apply(L, t, g.values, tol));
  return first - second - drift * mean_g;
}

}  // namespace

std::string derivative_mode_name(DerivativeMode mode) {
  switch (mode) {
    case DerivativeMode::General:
      return "general";
    case DerivativeMode::Gamma:
      return "gamma";
    case DerivativeMode::Invariant:
      return "invariant";
    case DerivativeMode::Symmetric:
      return "symmetric";
  }
  throw ValidationError("unknown derivative mode");
}

double covariance(const Measure& nu, const Generator& L, const Observable& f,
                  const Observable& g, double s, double t, const Tolerances& tol) {
  check_covariance_inputs(nu, L, f, g, s, t, tol);
  Vector ghat = semigroup_apply(L, t - s, g.values, tol);
  Vector fg = f.values.cwiseProduct(ghat);
  double joint = expectation(nu, semigroup_apply(L, s, fg, tol));
  double mean_f = expectation(nu, semigroup_apply(L, s, f.values, tol));
  double mean_g = expectation(nu, semigroup_apply(L, t, g.values, tol));
  return joint - mean_f * mean_g;
}

double covariance_s_derivative(const Measure& nu, const Generator& L,
                               const Observable& f, const Observable& g, double s,
                               double t, DerivativeMode mode, const Tolerances& tol) {
  check_covariance_inputs(nu, L, f, g, s, t, tol);
  switch (mode) {
    case DerivativeMode::General:
      return general_mode_derivative(nu, L, f, g, s, t, tol);
    case DerivativeMode::Gamma: {
      Observable ghat = semigroup_apply(L, t - s, g, tol);
      Observable gam = carre_du_champ(L, f, ghat);
      double flow = expectation(nu, semigroup_apply(L, s, gam.values, tol));
      Observable lf = L.apply(f);
      return flow + covariance(nu, L, lf, g, s, t, tol);
    }
    case DerivativeMode::Invariant: {
      double res = invariance_residual(L, nu.weights);
      if (res > tol.invariance_precheck) {
        std::ostringstream msg;
        msg << "invariant derivative mode needs an invariant initial measure; "
            << "residual " << res << " exceeds " << tol.invariance_precheck;
        throw ModePreconditionFailed(msg.str());
      }
      Vector ghat = semigroup_apply(L, t - s, g.values, tol);
      return -expectation(nu, f.values.cwiseProduct(L.apply(ghat)).eval());
    }
    case DerivativeMode::Symmetric: {
      double res = invariance_residual(L, nu.weights);
      if (res > tol.invariance_precheck) {
        std::ostringstream msg;
        msg << "symmetric derivative mode needs an invariant initial measure; "
            << "residual " << res << " exceeds " << tol.invariance_precheck;
        throw ModePreconditionFailed(msg.str());
      }
      double rev = reversibility_residual(L, nu);
      if (rev > tol.reversibility) {
        std::ostringstream msg;
        msg << "symmetric derivative mode needs diag(nu) L symmetric; "
            << "residual " << rev << " exceeds " << tol.reversibility;
        throw ModePreconditionFailed(msg.str());
      }
      Observable ghat = semigroup_apply(L, t - s, g, tol);
      Observable gam = carre_du_champ(L, f, ghat);
      return 0.5 * expectation(nu, gam);
    }
  }
  throw ValidationError("unknown derivative mode");
}

FdtCheckResult fdt_check(const Generator& L, const PerturbationFamily& fam,
                         const Observable& f, const Observable& g, double s, double t,
                         const Tolerances& tol) {
  require_same_space(L.space(), fam.base.space(), "fdt_check generator");
  check_direction(fam, f, "fdt_check");
  const Measure& mu0 = fam.mu0;
  FdtCheckResult out;
  out.derivative =
      covariance_s_derivative(mu0, L, f, g, s, t, DerivativeMode::Invariant, tol);
  Observable resp = response_function(L, fam, g, s, t, tol);
  out.response_mean = expectation(mu0, resp);
  out.dynamic_residual = std::abs(out.derivative - out.response_mean);
  out.static_residual = static_identity_check(L, fam, g, t - s, tol);
  return out;
}

double static_identity_check(const Generator& L, const PerturbationFamily& fam,
                             const Observable& g, double v, const Tolerances& tol) {
  require_same_space(L.space(), fam.base.space(), "static identity generator");
  require_same_space(g.space, L.space(), "static identity observable");
  if (v < 0.0) {
    throw BadTimes("static identity needs a nonnegative flow time");
  }
  Vector ghat = semigroup_apply(L, v, g.values, tol);
  Vector kicked = fam.kernel.apply(ghat);
  Vector drift = fam.direction.values.cwiseProduct(L.apply(ghat));
  return std::abs(expectation(fam.mu0, (kicked + drift).eval()));
}

RelaxationScan near_equilibrium_scan(const Measure& nu0, const Generator& L,
                                     const PerturbationFamily& fam, const Observable& g,
                                     double tau, const std::vector<double>& s_grid,
                                     const Tolerances& tol) {
  require_same_space(nu0.space, L.space(), "relaxation scan initial measure");
  require_same_space(L.space(), fam.base.space(), "relaxation scan generator");
  require_same_space(g.space, L.space(), "relaxation scan observable");
  if (!is_irreducible(L)) {
    throw Reducible("relaxation scan needs an irreducible chain");
  }
  if (!(tau >= 0.0)) {
    throw BadTimes("relaxation scan needs tau >= 0");
  }
  if (s_grid.empty()) {
    throw ValidationError("relaxation scan needs a nonempty s grid");
  }
  for (std::size_t i = 0; i < s_grid.size(); ++i) {
    if (!(s_grid[i] >= 0.0) || (i > 0 && s_grid[i] <= s_grid[i - 1])) {
      throw ValidationError("relaxation scan s grid must be nonnegative and increasing");
    }
  }
  if (!nu0.is_probability(tol.measure_normalization)) {
    throw UnnormalizedInitial("relaxation scan initial measure must be a probability");
  }

  const Observable& f = fam.direction;
  RelaxationScan out;
  out.gap = spectral_gap(L);
  std::vector<double> ss;
  std::vector<double> defects;
  double last_response = 0.0;
  for (double s : s_grid) {
    double deriv = covariance_s_derivative(nu0, L, f, g, s, s + tau,
                                           DerivativeMode::General, tol);
    Observable resp = response_function(L, fam, g, s, s + tau, tol);
    last_response = expectation(nu0, resp);
    double defect = std::abs(deriv - last_response);
    out.rows.push_back({s, defect});
    ss.push_back(s);
    defects.push_back(defect);
  }
  out.fit = fit_semilog(ss, defects, tol.relaxation_floor);
  out.rate_ok = out.fit.points_used < 2 ||
                -out.fit.slope >= tol.relaxation_slope_factor * out.gap;
  out.terminal_defect = out.rows.back().defect;
  out.terminal_response = last_response;
  Vector gtau = semigroup_apply(L, tau, g.values, tol);
  out.equilibrium_limit =
      -expectation(fam.mu0, f.values.cwiseProduct(L.apply(gtau)).eval());
  out.limit_difference = std::abs(out.terminal_response - out.equilibrium_limit);
  return out;
}

GreenKuboResult green_kubo(const Generator& L, const Measure& mu0, const Observable& f,
                           const Observable& g, double t_max, const Tolerances& tol) {
  require_same_space(mu0.space, L.space(), "green-kubo measure");
  require_same_space(f.space, L.space(), "green-kubo first observable");
  require_same_space(g.space, L.space(), "green-kubo second observable");
  if (!mu0.strictly_positive() || !mu0.is_probability(tol.measure_normalization)) {
    throw UnnormalizedInitial(
        "green-kubo needs a strictly positive probability measure");
  }
  double rev = reversibility_residual(L, mu0);
  if (rev > tol.reversibility) {
    std::ostringstream msg;
    msg << "green-kubo needs a reversible chain; detailed-balance residual " << rev
        << " exceeds " << tol.reversibility;
    throw NotReversible(msg.str());
  }

  GreenKuboResult out;
  Vector lf = L.apply(f.values);
  Vector lg = L.apply(g.values);
  out.static_value = -expectation(mu0, f.values.cwiseProduct(lg).eval());
  out.gamma_half = 0.5 * expectation(mu0, carre_du_champ(L, f, g));
  out.identity_residual = std::abs(out.static_value - out.gamma_half);

  double gap = spectral_gap(L);
  out.horizon = t_max > 0.0 ? t_max : tol.green_kubo_horizon / gap;

  // int_0^T P_s (Lf) ds is the top block of exp(T [[L, I],[0, 0]]) [0; Lf].
  const int n = L.size();
  const Matrix& lm = L.matrix();
  double shift = std::max(L.uniformization_rate(), 1e-12);
  double growth = 1.0 + 1.0 / shift;
  auto step = [&](const Vector& uv) {
    Vector next(2 * n);
    next.head(n) = uv.head(n) + (lm * uv.head(n) + uv.tail(n)) / shift;
    next.tail(n) = uv.tail(n);
    return next;
  };
  Vector uv = Vector::Zero(2 * n);
  uv.tail(n) = lf;
  Vector flowed =
      poisson_expm_apply(shift, out.horizon, step, uv, tol.semigroup_tail, growth);
  out.integral = mu0.weights.cwiseProduct(lg).dot(flowed.head(n));

  out.tail_bound = std::exp(-gap * out.horizon) / gap * l2_norm(mu0, lf) *
                   l2_norm(mu0, lg);
  double scale = std::max({std::abs(out.static_value), std::abs(out.gamma_half),
                           std::abs(out.integral)});
  double diff = std::abs(out.static_value - out.integral);
  out.relative_residual = scale < 1e-12 ? diff : diff / scale;
  return out;
}

double b_symmetry_residual(const PerturbationFamily& fam, const Observable& f) {
  require_same_space(f.space, fam.base.space(), "b-symmetry observable");
  Matrix b = fam.kernel.matrix() + f.values.asDiagonal() * fam.base.matrix();
  Matrix weighted = fam.mu0.weights.asDiagonal() * b;
  return (weighted - weighted.transpose()).cwiseAbs().maxCoeff();
}

double b_symmetry_check(const PerturbationFamily& fam, const Observable& f,
                        const Tolerances& tol) {
  check_direction(fam, f, "b_symmetry_check");
  double probe = 0.2;
  if (std::isfinite(fam.delta_cap)) {
    probe = std::min(probe, 0.5 * fam.delta_cap);
  }
  for (double delta : {0.0, probe}) {
    Generator pert = fam.generator_at(delta);
    Vector w = fam.perturbed_weights(delta);
    Measure nu = Measure::on(fam.base.space(), w / w.sum());
    double rev = reversibility_residual(pert, nu);
    if (rev > tol.reversibility) {
      std::ostringstream msg;
      msg << "family is not mu^{delta f}-symmetric at delta=" << delta
          << "; detailed-balance residual " << rev << " exceeds "
          << tol.reversibility;
      throw NotSymmetricFamily(msg.str(), rev);
    }
  }
  return b_symmetry_residual(fam, f);
}

}  // namespace fdtlab
