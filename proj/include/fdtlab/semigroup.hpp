#pragma once

#include <functional>

#include "fdtlab/generator.hpp"

namespace fdtlab {

/// P_t g = exp(tL) g by uniformization: the Poisson-weighted power series of
/// the stochastic matrix I + L/lambda, truncated when the remaining Poisson
/// tail mass falls below tol.semigroup_tail. Positivity and sup-norm
/// contraction are preserved term by term.
Vector semigroup_apply(const Generator& L, double t, const Vector& g,
                       const Tolerances& tol = default_tolerances());
Observable semigroup_apply(const Generator& L, double t, const Observable& g,
                           const Tolerances& tol = default_tolerances());

/// exp(tM) v for a general square matrix via the same shifted Poisson series,
/// with the truncation bound inflated by the sup operator norm of the shifted
/// matrix (the series matvec is supplied as a callback so block-structured
/// matrices need not be formed). `shift_rate` must dominate max_i |M(i,i)|;
/// `growth` must dominate ||I + M/shift_rate||_inf.
Vector poisson_expm_apply(double shift_rate, double t,
                          const std::function<Vector(const Vector&)>& shifted_step,
                          Vector v, double tail_tol, double growth);

}  // namespace fdtlab
