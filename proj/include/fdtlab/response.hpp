#pragma once

#include <vector>

#include "fdtlab/family.hpp"
#include "fdtlab/semigroup.hpp"

namespace fdtlab {

/// Response of the observable g to a kernel kick at time s, observed at
/// time t: R(s,t) = P_s A_f P_{t-s} g, state by state.
Observable response_function(const Generator& L, const PerturbationFamily& fam,
                             const Observable& g, double s, double t,
                             const Tolerances& tol = default_tolerances());

/// Time integral of the response, int_0^t P_s A_f P_{t-s} ghat ds, computed
/// through the corner block of the matrix exponential of [[L, A],[0, L]] t
/// so the only error is exponential-series truncation.
Observable response_integral(const Generator& L, const PerturbationFamily& fam,
                             const Observable& ghat, double t,
                             const Tolerances& tol = default_tolerances());

/// Independent quadrature oracle for response_integral: composite Simpson
/// over an even number of panels.
Observable response_integral_simpson(const Generator& L, const PerturbationFamily& fam,
                                     const Observable& ghat, double t, int panels = 1024,
                                     const Tolerances& tol = default_tolerances());

/// Finite-strength difference quotient of the semigroup against the response
/// integral. The residual eta = ||quotient - integral|| / t is reported in
/// the sup norm and the mu0-weighted L2 norm; `eta` holds whichever norm the
/// family's convergence theory is stated in (L2 for Langevin, sup otherwise).
struct FiniteDifferenceResponse {
  Observable difference_quotient;
  double eta_sup = 0.0;
  double eta_l2 = 0.0;
  double eta = 0.0;
};

FiniteDifferenceResponse finite_difference_response(
    const Generator& L, const PerturbationFamily& fam, const Observable& ghat, double t,
    double delta, const Tolerances& tol = default_tolerances());

/// Residual per unit perturbation window for a kick confined to [a, a+t] and
/// observed at a+t+b:
///   || delta^{-1} P_a (P_t^{delta f} - P_t) P_b g
///      - int_a^{a+t} R(u, a+t+b) du || / t.
/// Reduces to finite_difference_response when a = b = 0.
double windowed_response_check(const Generator& L, const PerturbationFamily& fam,
                               const Observable& g, double a, double b, double t,
                               double delta, const Tolerances& tol = default_tolerances());

/// Operator sup-norm residual of delta^{-1}(L^{delta f} - L) against the
/// response kernel, per strength, with a log-log slope fit.
struct KernelConvergenceRow {
  double delta = 0.0;
  double residual = 0.0;
};

struct KernelConvergenceReport {
  std::vector<KernelConvergenceRow> rows;
  SlopeFit fit;
};

KernelConvergenceReport kernel_norm_convergence(const PerturbationFamily& fam,
                                                const std::vector<double>& deltas);

}  // namespace fdtlab
