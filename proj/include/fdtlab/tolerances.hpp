#pragma once

#include <string>

namespace fdtlab {

/// Central tolerance configuration. Every residual check in the library reads
/// its threshold from one of these fields; checks report the achieved residual
/// alongside the threshold rather than a bare boolean.
struct Tolerances {
  // markov-core
  double generator_row_sum = 1e-12;     // |row sum| of a valid generator
  double semigroup_tail = 1e-14;        // Poisson tail mass dropped by uniformization
  double invariant_residual = 1e-12;    // ||mu^T L||_inf for invariant_measure output
  double invariance_precheck = 1e-10;   // mu invariance required by adjoint/families
  double reversibility = 1e-10;         // detailed balance detection threshold
  double measure_normalization = 1e-12; // |sum(w) - 1| for probability measures

  // perturbations
  double family_at_zero = 1e-14;        // generator_at(0) vs base, entrywise
  double family_invariance = 1e-10;     // ||(e^{df} mu0)^T L^{df}||_inf at any delta
  double kernel_row_sum = 1e-12;        // response kernel rows sum to zero
  double balance = 1e-10;               // general-b balance condition residual
  double metropolis_tie = 1e-12;        // |dH| below this counts as dH = 0

  // response
  double simpson_agreement = 1e-8;      // block exponential vs quadrature, relative

  // fdt-suite
  double fdt_dynamic = 1e-9;            // |ds K - <R>_{mu0}|
  double fdt_static = 1e-10;            // |<(A_f + fL) ghat>_{mu0}|
  double mode_agreement = 1e-10;        // covariance derivative modes, pairwise
  double derivative_fd = 1e-7;          // analytic vs Richardson finite difference
  double relaxation_floor = 1e-11;      // defect values below this are round-off
  double relaxation_slope_factor = 0.9; // required decay rate as fraction of gap
  double green_kubo_identity = 1e-12;   // -<fLg> vs (1/2)<Gamma(f,g)>
  double green_kubo_relative = 1e-6;    // integral vs static value, relative
  double green_kubo_horizon = 50.0;     // default T_max = horizon / gap
  double b_symmetry = 1e-10;            // mu0-symmetry of B = A_f + fL

  // diffusion-mc
  double stability_guard = 0.1;         // dt * ||b||_inf must stay below this
  double current_constancy = 1e-10;     // torus probability-current residual
};

inline const Tolerances& default_tolerances() {
  static const Tolerances tol{};
  return tol;
}

/// Applies a named override ("fdt_dynamic", "balance", ...). Returns false if
/// the name is unknown.
bool set_tolerance(Tolerances& tol, const std::string& name, double value);

}  // namespace fdtlab
