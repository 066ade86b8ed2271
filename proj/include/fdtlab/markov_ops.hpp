#pragma once

#include "fdtlab/generator.hpp"

namespace fdtlab {

/// Number of strongly connected components of the jump graph (edge x -> y
/// iff c(x,y) > 0).
int strong_component_count(const Matrix& rates);
bool is_irreducible(const Generator& L);

/// ||w^T L||_inf for a weight vector w.
double invariance_residual(const Generator& L, const Vector& w);

/// Unique invariant probability measure of an irreducible chain, solved by
/// dense LU on L^T with one row replaced by the normalization constraint.
Measure invariant_measure(const Generator& L, const Tolerances& tol = default_tolerances());

/// max |mu(x)c(x,y) - mu(y)c(y,x)| over pairs.
double reversibility_residual(const Generator& L, const Measure& mu0);
bool is_reversible(const Generator& L, const Measure& mu0,
                   const Tolerances& tol = default_tolerances());

/// Time-reversed generator c*(x,y) = mu0(y) c(y,x) / mu0(x).
Generator adjoint(const Generator& L, const Measure& mu0,
                  const Tolerances& tol = default_tolerances());

/// Entrywise average (L + L*)/2; mu0-symmetric.
Generator symmetrize(const Generator& L, const Measure& mu0,
                     const Tolerances& tol = default_tolerances());

/// Gamma(f,g) = L(fg) - f Lg - g Lf.
Observable carre_du_champ(const Generator& L, const Observable& f, const Observable& g);

/// Smallest positive real part of -lambda over nonzero eigenvalues of L.
struct SpectralGapInfo {
  double gap = 0.0;
  bool real = false;    // the gap eigenvalue is real
  bool simple = false;  // no other eigenvalue within 5% of the gap's real part
};
SpectralGapInfo spectral_gap_info(const Generator& L);
double spectral_gap(const Generator& L);

}  // namespace fdtlab
