#pragma once

#include <string>
#include <vector>

#include "fdtlab/family.hpp"
#include "fdtlab/markov_ops.hpp"
#include "fdtlab/response.hpp"

namespace fdtlab {

/// Which expression computes the s-derivative of the two-time covariance.
/// All four agree on their common validity domain; they route the generator
/// through different operator orderings, so cross-checking them exercises
/// independent code paths.
enum class DerivativeMode {
  General,    // any initial measure
  Gamma,      // any initial measure, via the carre du champ
  Invariant,  // requires nu invariant for L
  Symmetric,  // requires nu invariant and diag(nu) L symmetric
};

std::string derivative_mode_name(DerivativeMode mode);

/// Two-time covariance of f at time s and g at time t >= s >= 0, started
/// from the probability measure nu:
///   K(s,t) = <P_s(f . P_{t-s} g)>_nu - <P_s f>_nu <P_t g>_nu.
double covariance(const Measure& nu, const Generator& L, const Observable& f,
                  const Observable& g, double s, double t,
                  const Tolerances& tol = default_tolerances());

/// d/ds K(s,t) at fixed t, by the chosen mode:
///   General:   <P_s L(f.P_{t-s}g)>_nu - <P_s(f.P_{t-s}Lg)>_nu
///              - <P_s Lf>_nu <P_t g>_nu
///   Gamma:     <P_s Gamma(f, P_{t-s}g)>_nu + K_{Lf,g}(s,t)
///   Invariant: -<f . L P_{t-s} g>_nu
///   Symmetric: (1/2) <Gamma(f, P_{t-s}g)>_nu
/// Throws ModePreconditionFailed when nu does not satisfy the mode's
/// requirement.
double covariance_s_derivative(const Measure& nu, const Generator& L,
                               const Observable& f, const Observable& g, double s,
                               double t, DerivativeMode mode,
                               const Tolerances& tol = default_tolerances());

/// Equilibrium fluctuation-dissipation check for a perturbation family:
/// the s-derivative of the stationary covariance must equal the
/// mu0-averaged response, and the kernel must satisfy the static identity
/// <A_f h>_{mu0} = -<f . Lh>_{mu0} with h = P_{t-s} g.
struct FdtCheckResult {
  double derivative = 0.0;        // d/ds K(s,t) under mu0
  double response_mean = 0.0;     // <R(s,t)>_{mu0}
  double dynamic_residual = 0.0;  // |derivative - response_mean|
  double static_residual = 0.0;   // |<(A_f + f.L) P_{t-s} g>_{mu0}|
};

FdtCheckResult fdt_check(const Generator& L, const PerturbationFamily& fam,
                         const Observable& f, const Observable& g, double s, double t,
                         const Tolerances& tol = default_tolerances());

/// |<(A_f + f.L) P_v g>_{mu0}| with f the family's direction.
double static_identity_check(const Generator& L, const PerturbationFamily& fam,
                             const Observable& g, double v,
                             const Tolerances& tol = default_tolerances());

/// Relaxation of the fluctuation-dissipation defect from a non-stationary
/// start: d(s) = |d/ds K(s,s+tau) - <R(s,s+tau)>_{nu0}| decays geometrically
/// at the spectral gap as nu0 P_s approaches mu0.
struct RelaxationRow {
  double s = 0.0;
  double defect = 0.0;
};

struct RelaxationScan {
  std::vector<RelaxationRow> rows;
  double gap = 0.0;           // spectral gap of the base chain
  SlopeFit fit;               // semilog fit of defect against s, above the floor
  bool rate_ok = false;       // -fit.slope >= slope_factor * gap, or fully relaxed
  double terminal_defect = 0.0;    // defect at the last grid point
  double terminal_response = 0.0;  // <R(s_max, s_max+tau)>_{nu0}
  double equilibrium_limit = 0.0;  // -<f . L P_tau g>_{mu0}
  double limit_difference = 0.0;   // |terminal_response - equilibrium_limit|
};

RelaxationScan near_equilibrium_scan(const Measure& nu0, const Generator& L,
                                     const PerturbationFamily& fam, const Observable& g,
                                     double tau, const std::vector<double>& s_grid,
                                     const Tolerances& tol = default_tolerances());

/// Static dissipation against the time integral of the current-current
/// correlation on a reversible chain:
///   -<f L g>_{mu0} = (1/2) <Gamma(f,g)>_{mu0}
///                  = int_0^inf <(P_s Lf)(Lg)>_{mu0} ds.
/// The integral is truncated at `horizon`; the dropped tail is bounded by
/// e^{-gap . horizon} ||Lf|| ||Lg|| / gap in L2(mu0) norms.
struct GreenKuboResult {
  double static_value = 0.0;       // -<f L g>_{mu0}
  double gamma_half = 0.0;         // (1/2) <Gamma(f,g)>_{mu0}
  double integral = 0.0;           // int_0^horizon <(P_s Lf)(Lg)>_{mu0} ds
  double horizon = 0.0;
  double tail_bound = 0.0;
  double identity_residual = 0.0;  // |static_value - gamma_half|
  double relative_residual = 0.0;  // |static_value - integral| / scale
};

/// t_max <= 0 selects the default horizon tol.green_kubo_horizon / gap.
GreenKuboResult green_kubo(const Generator& L, const Measure& mu0, const Observable& f,
                           const Observable& g, double t_max = 0.0,
                           const Tolerances& tol = default_tolerances());

/// Raw mu0-asymmetry of B = A_f + diag(f) L: max |mu0(x)B(x,y) - mu0(y)B(y,x)|.
/// No preconditions; diagnostic use.
double b_symmetry_residual(const PerturbationFamily& fam, const Observable& f);

/// Checked version: first probes that the perturbed generator is reversible
/// for the normalized e^{delta f} mu0 at delta in {0, min(0.2, cap/2)}; if a
/// probe fails, throws NotSymmetricFamily carrying the detailed-balance
/// residual. Otherwise returns b_symmetry_residual.
double b_symmetry_check(const PerturbationFamily& fam, const Observable& f,
                        const Tolerances& tol = default_tolerances());

}  // namespace fdtlab
