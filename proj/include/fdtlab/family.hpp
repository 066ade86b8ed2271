#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "fdtlab/generator.hpp"
#include "fdtlab/kernel.hpp"

namespace fdtlab {

enum class FamilyKind {
  TimeChange,
  Langevin,
  GeneralB,
  Cycle,
  Metropolis,
  Glauber,
  GridDiffusion,  // ring discretization of a torus diffusion; approximate family
};

std::string family_kind_name(FamilyKind kind);
std::optional<FamilyKind> family_kind_from_name(const std::string& name);

/// A delta-indexed family of Markovian perturbations of a base chain in
/// direction f, keeping e^{delta f} mu0 invariant at every delta, together
/// with its response kernel A_f (the delta-derivative of the generator at 0).
struct PerturbationFamily {
  FamilyKind kind = FamilyKind::TimeChange;
  Generator base;
  Measure mu0;           // normalized invariant measure of the base
  Observable direction;  // f
  ResponseKernel kernel;
  double delta_cap = std::numeric_limits<double>::infinity();
  bool cap_inclusive = true;
  /// Off-diagonal rates of the perturbed generator at a given delta.
  std::function<Matrix(double)> offdiag_rates_at;

  bool admissible(double delta) const;
  /// Validated perturbed generator; throws DeltaTooLarge beyond the cap.
  Generator generator_at(double delta) const;
  /// Unnormalized perturbed weights e^{delta f} .* mu0.
  Vector perturbed_weights(double delta) const;
  /// ||(e^{delta f} mu0)^T L^{delta f}||_inf.
  double invariance_residual_at(double delta) const;
};

/// Rates e^{-delta f(x)} c(x,y); kernel -f(x) c(x,y). No delta cap.
PerturbationFamily time_change_family(const Generator& L, const Measure& mu0,
                                      const Observable& f,
                                      const Tolerances& tol = default_tolerances());

/// Rates (1/2)(e^{delta(f(y)-f(x))} + e^{-delta f(x)}) c(x,y)
///       + (1/2)(1 - e^{-delta f(x)}) c*(x,y);
/// kernel -f(x)c(x,y) + (1/2) f(y) c(x,y) + (1/2) f(x) c*(x,y).
/// On a mu0-reversible base any f is allowed (the rates reduce to
/// (1/2)(e^{delta(f(y)-f(x))} + 1) c(x,y) and the kernel to
/// (1/2)(f(y)-f(x)) c(x,y) = (1/2) Gamma(f, .)); otherwise f must be
/// nonnegative so that the c* term keeps a nonnegative coefficient.
PerturbationFamily langevin_family(const Generator& L, const Measure& mu0,
                                   const Observable& f,
                                   const Tolerances& tol = default_tolerances());

/// Rates e^{-delta f(x)} (c(x,y) + delta b(x,y)); kernel b(x,y) - f(x)c(x,y).
/// b must satisfy the per-state balance mu0(x) sum_y b(x,y) = sum_y mu0(y) b(y,x)
/// and be bounded below by -rho c entrywise; valid for delta < 1/rho.
PerturbationFamily general_b_family(const Generator& L, const Measure& mu0,
                                    const Observable& f, const Matrix& b,
                                    const Tolerances& tol = default_tolerances());

/// Oriented cycle with weights: alpha >= 0 scales the base rates, beta tilts
/// them linearly in delta. States must be distinct; the cycle closes from the
/// last state back to the first.
struct CycleWeight {
  std::vector<int> states;
  double alpha = 0.0;
  double beta = 0.0;
};

/// Base rates c(x,y) = (1/mu0(x)) sum_gamma alpha(gamma) over cycles gamma
/// traversing edge (x,y); perturbed rates scale alpha to alpha + delta beta
/// and multiply by e^{-delta f(x)}; kernel
/// -f(x)c(x,y) + (1/mu0(x)) sum_gamma beta(gamma).
/// mu0 is normalized internally and is invariant for the base by construction.
PerturbationFamily cycle_family(const StateSpace& space, const Measure& mu0,
                                const std::vector<CycleWeight>& cycles,
                                const Observable& f,
                                const Tolerances& tol = default_tolerances());

/// Finite graph with an energy per state; edge set is undirected.
struct HamiltonianGraph {
  StateSpace space;
  std::vector<std::pair<int, int>> edges;
  Observable H;

  static HamiltonianGraph make(const StateSpace& space,
                               std::vector<std::pair<int, int>> edges, Observable H);
  bool has_edge(int x, int y) const;
  bool connected() const;
};

/// Metropolis rates c(x,y) = min(1, e^{-(H(y)-H(x))}) on edges; the
/// perturbation replaces H by H - delta f. Kernel (with dH = H(y)-H(x),
/// df = f(y)-f(x)):  df e^{-dH} (1_{dH>0} + 1_{dH=0} 1_{f(x)>f(y)}).
/// Ties |dH| <= tol.metropolis_tie count as dH = 0.
PerturbationFamily metropolis_family(const HamiltonianGraph& hg, const Observable& f,
                                     const Tolerances& tol = default_tolerances());

/// Glauber rates c(x,y) = 1/(1 + e^{H(y)-H(x)}) on edges; kernel
/// df e^{-dH}/(1+e^{-dH})^2.
PerturbationFamily glauber_family(const HamiltonianGraph& hg, const Observable& f,
                                  const Tolerances& tol = default_tolerances());

/// Same family with the kernel replaced (fault injection and custom
/// discretized kernels).
PerturbationFamily with_kernel(PerturbationFamily fam, ResponseKernel kernel);

/// f - min(f): the smallest constant shift making f nonnegative. Shifting f
/// by a constant changes only the normalization of e^{delta f} mu0.
Observable shift_to_nonnegative(const Observable& f);

struct FamilyCheckRow {
  double delta = 0.0;
  bool generator_ok = false;
  double invariance_residual = std::numeric_limits<double>::quiet_NaN();
  std::optional<double> reversibility_residual;  // Metropolis/Glauber only
};

/// Batches the family invariants over a delta grid: generator validity,
/// mu^{delta f} invariance, and (for Metropolis/Glauber) detailed balance of
/// the perturbed chain with respect to the normalized perturbed measure.
std::vector<FamilyCheckRow> verify_family(const PerturbationFamily& fam,
                                          const std::vector<double>& deltas,
                                          const Tolerances& tol = default_tolerances());

}  // namespace fdtlab
