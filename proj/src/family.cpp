#include "fdtlab/family.hpp"

#include <cmath>
#include <limits>
#include <queue>
#include <set>
#include <sstream>

#include "fdtlab/markov_ops.hpp"

namespace fdtlab {

std::string family_kind_name(FamilyKind kind) {
  switch (kind) {
    case FamilyKind::TimeChange: return "time_change";
    case FamilyKind::Langevin: return "langevin";
    case FamilyKind::GeneralB: return "general_b";
    case FamilyKind::Cycle: return "cycle";
    case FamilyKind::Metropolis: return "metropolis";
    case FamilyKind::Glauber: return "glauber";
    case FamilyKind::GridDiffusion: return "grid_diffusion";
  }
  return "unknown";
}

std::optional<FamilyKind> family_kind_from_name(const std::string& name) {
  if (name == "time_change") return FamilyKind::TimeChange;
  if (name == "langevin") return FamilyKind::Langevin;
  if (name == "general_b") return FamilyKind::GeneralB;
  if (name == "cycle") return FamilyKind::Cycle;
  if (name == "metropolis") return FamilyKind::Metropolis;
  if (name == "glauber") return FamilyKind::Glauber;
  if (name == "grid_diffusion") return FamilyKind::GridDiffusion;
  return std::nullopt;
}

bool PerturbationFamily::admissible(double delta) const {
  if (delta < 0.0) return false;
  return cap_inclusive ? delta <= delta_cap : delta < delta_cap;
}

Generator PerturbationFamily::generator_at(double delta) const {
  if (delta < 0.0) throw ValidationError("perturbation strength delta must be >= 0");
  if (!admissible(delta)) {
    std::ostringstream msg;
    msg << family_kind_name(kind) << " family: delta " << delta << " exceeds the cap "
        << delta_cap << (cap_inclusive ? " (inclusive)" : " (exclusive)");
    throw DeltaTooLarge(msg.str(), delta, delta_cap);
  }
  return Generator::from_offdiagonal(base.space(), offdiag_rates_at(delta));
}

Vector PerturbationFamily::perturbed_weights(double delta) const {
  return (delta * direction.values).array().exp().matrix().cwiseProduct(mu0.weights);
}

double PerturbationFamily::invariance_residual_at(double delta) const {
  return invariance_residual(generator_at(delta), perturbed_weights(delta));
}

namespace {

void check_family_inputs(const Generator& L, const Measure& mu0, const Observable& f,
                         const Tolerances& tol, const char* what) {
  require_same_space(L.space(), mu0.space, what);
  require_same_space(L.space(), f.space, what);
  if (!mu0.strictly_positive())
    throw ValidationError(std::string(what) + " needs a strictly positive measure");
  double res = invariance_residual(L, mu0.weights / mu0.total());
  if (res > tol.invariance_precheck) {
    std::ostringstream msg;
    msg << what << ": mu0 is not invariant for the base generator (residual " << res << ")";
    throw NotInvariant(msg.str());
  }
}

}  // namespace

PerturbationFamily time_change_family(const Generator& L, const Measure& mu0,
                                      const Observable& f, const Tolerances& tol) {
  check_family_inputs(L, mu0, f, tol, "time_change_family");
  int n = L.size();
  Matrix kernel = Matrix::Zero(n, n);
  for (int x = 0; x < n; ++x) {
    for (int y = 0; y < n; ++y) {
      if (x != y) kernel(x, y) = -f.values(x) * L.rate(x, y);
    }
  }
  PerturbationFamily fam;
  fam.kind = FamilyKind::TimeChange;
  fam.base = L;
  fam.mu0 = mu0.normalized_copy();
  fam.direction = f;
  fam.kernel = ResponseKernel::from_offdiagonal(L.space(), std::move(kernel));
  Matrix c = L.matrix();
  Vector fv = f.values;
  fam.offdiag_rates_at = [c, fv, n](double delta) {
    Matrix out(n, n);
    for (int x = 0; x < n; ++x) {
      double scale = std::exp(-delta * fv(x));
      for (int y = 0; y < n; ++y) out(x, y) = (x == y) ? 0.0 : scale * c(x, y);
    }
    return out;
  };
  return fam;
}

PerturbationFamily langevin_family(const Generator& L, const Measure& mu0,
                                   const Observable& f, const Tolerances& tol) {
  check_family_inputs(L, mu0, f, tol, "langevin_family");
  Measure mu = mu0.normalized_copy();
  bool reversible = is_reversible(L, mu, tol);
  if (!reversible && f.values.minCoeff() < 0.0) {
    throw NegativeDirection(
        "langevin_family on a non-reversible base needs f >= 0; "
        "shift_to_nonnegative(f) adds the smallest admissible constant "
        "(a constant shift only rescales the perturbed measure)");
  }
  int n = L.size();
  Generator star = adjoint(L, mu, tol);

  Matrix kernel = Matrix::Zero(n, n);
  for (int x = 0; x < n; ++x) {
    for (int y = 0; y < n; ++y) {
      if (x == y) continue;
      if (reversible) {
        kernel(x, y) = 0.5 * (f.values(y) - f.values(x)) * L.rate(x, y);
      } else {
        kernel(x, y) = -f.values(x) * L.rate(x, y) + 0.5 * f.values(y) * L.rate(x, y) +
                       0.5 * f.values(x) * star.rate(x, y);
      }
    }
  }

  PerturbationFamily fam;
  fam.kind = FamilyKind::Langevin;
  fam.base = L;
  fam.mu0 = mu;
  fam.direction = f;
  fam.kernel = ResponseKernel::from_offdiagonal(L.space(), std::move(kernel));
  Matrix c = L.matrix();
  Matrix cs = star.matrix();
  Vector fv = f.values;
  if (reversible) {
    // With detailed balance c* = c and the two-term rate formula collapses to
    // (1/2)(e^{delta(f(y)-f(x))} + 1) c(x,y), nonnegative for any sign of f.
    fam.offdiag_rates_at = [c, fv, n](double delta) {
      Matrix out(n, n);
      for (int x = 0; x < n; ++x) {
        for (int y = 0; y < n; ++y) {
          out(x, y) = (x == y) ? 0.0
                               : 0.5 * (std::exp(delta * (fv(y) - fv(x))) + 1.0) * c(x, y);
        }
      }
      return out;
    };
  } else {
    fam.offdiag_rates_at = [c, cs, fv, n](double delta) {
      Matrix out(n, n);
      for (int x = 0; x < n; ++x) {
        double down = std::exp(-delta * fv(x));
        for (int y = 0; y < n; ++y) {
          if (x == y) {
            out(x, y) = 0.0;
          } else {
            out(x, y) = 0.5 * (std::exp(delta * (fv(y) - fv(x))) + down) * c(x, y) +
                        0.5 * (1.0 - down) * cs(x, y);
          }
        }
      }
      return out;
    };
  }
  return fam;
}

PerturbationFamily general_b_family(const Generator& L, const Measure& mu0,
                                    const Observable& f, const Matrix& b,
                                    const Tolerances& tol) {
  check_family_inputs(L, mu0, f, tol, "general_b_family");
  int n = L.size();
  if (b.rows() != n || b.cols() != n)
    throw ValidationError("general_b_family: b shape does not match state space");
  if (!b.allFinite()) throw ValidationError("general_b_family: b has non-finite entries");

  Measure mu = mu0.normalized_copy();
  Matrix boff = b;
  boff.diagonal().setZero();

  for (int x = 0; x < n; ++x) {
    double outflow = mu.weights(x) * boff.row(x).sum();
    double inflow = mu.weights.dot(boff.col(x));
    if (std::abs(outflow - inflow) > tol.balance) {
      std::ostringstream msg;
      msg << "general_b_family: balance violated at state " << L.space().labels[x]
          << " (outflow " << outflow << " vs inflow " << inflow << ")";
      throw BalanceViolation(msg.str());
    }
  }

  double rho = 0.0;
  for (int x = 0; x < n; ++x) {
    for (int y = 0; y < n; ++y) {
      if (x == y) continue;
      if (L.rate(x, y) > 0.0) {
        rho = std::max(rho, -boff(x, y) / L.rate(x, y));
      } else if (boff(x, y) < 0.0) {
        std::ostringstream msg;
        msg << "general_b_family: b(" << L.space().labels[x] << ", " << L.space().labels[y]
            << ") = " << boff(x, y) << " is negative where the base rate vanishes";
        throw UnboundedBelow(msg.str());
      }
    }
  }

  Matrix kernel = boff;
  for (int x = 0; x < n; ++x) {
    for (int y = 0; y < n; ++y) {
      if (x != y) kernel(x, y) -= f.values(x) * L.rate(x, y);
    }
  }

  PerturbationFamily fam;
  fam.kind = FamilyKind::GeneralB;
  fam.base = L;
  fam.mu0 = mu;
  fam.direction = f;
  fam.kernel = ResponseKernel::from_offdiagonal(L.space(), std::move(kernel));
  fam.delta_cap = rho > 0.0 ? 1.0 / rho : std::numeric_limits<double>::infinity();
  fam.cap_inclusive = false;
  Matrix c = L.matrix();
  Vector fv = f.values;
  fam.offdiag_rates_at = [c, boff, fv, n](double delta) {
    Matrix out(n, n);
    for (int x = 0; x < n; ++x) {
      double scale = std::exp(-delta * fv(x));
      for (int y = 0; y < n; ++y) {
        out(x, y) = (x == y) ? 0.0 : scale * (c(x, y) + delta * boff(x, y));
      }
    }
    return out;
  };
  return fam;
}

namespace {

void validate_cycles(const StateSpace& space, const std::vector<CycleWeight>& cycles) {
  for (size_t i = 0; i < cycles.size(); ++i) {
    const auto& cyc = cycles[i];
    if (cyc.states.size() < 2) {
      std::ostringstream msg;
      msg << "cycle " << i << " has fewer than 2 states";
      throw MalformedCycle(msg.str());
    }
    std::set<int> seen;
    for (int s : cyc.states) {
      if (s < 0 || s >= space.size()) {
        std::ostringstream msg;
        msg << "cycle " << i << " references state " << s << " outside the space";
        throw MalformedCycle(msg.str());
      }
      if (!seen.insert(s).second) {
        std::ostringstream msg;
        msg << "cycle " << i << " visits state " << space.labels[s] << " twice";
        throw MalformedCycle(msg.str());
      }
    }
    if (cyc.alpha < 0.0) {
      std::ostringstream msg;
      msg << "cycle " << i << " has negative alpha " << cyc.alpha;
      throw NegativeAlpha(msg.str());
    }
  }
}

// Sum of per-cycle weights over the oriented edges of each cycle.
Matrix cycle_edge_sum(const StateSpace& space, const std::vector<CycleWeight>& cycles,
                      double CycleWeight::*weight) {
  int n = space.size();
  Matrix m = Matrix::Zero(n, n);
  for (const auto& cyc : cycles) {
    int k = static_cast<int>(cyc.states.size());
    for (int i = 0; i < k; ++i) {
      int from = cyc.states[i];
      int to = cyc.states[(i + 1) % k];
      m(from, to) += cyc.*weight;
    }
  }
  return m;
}

}  // namespace

PerturbationFamily cycle_family(const StateSpace& space, const Measure& mu0,
                                const std::vector<CycleWeight>& cycles,
                                const Observable& f, const Tolerances& tol) {
  require_same_space(space, mu0.space, "cycle_family");
  require_same_space(space, f.space, "cycle_family");
  if (!mu0.strictly_positive())
    throw ValidationError("cycle_family needs a strictly positive measure");
  validate_cycles(space, cycles);

  Measure mu = mu0.normalized_copy();
  int n = space.size();
  Matrix alpha_sum = cycle_edge_sum(space, cycles, &CycleWeight::alpha);
  Matrix beta_sum = cycle_edge_sum(space, cycles, &CycleWeight::beta);

  double cap = std::numeric_limits<double>::infinity();
  for (const auto& cyc : cycles) {
    if (cyc.beta < 0.0) cap = std::min(cap, cyc.alpha / (-cyc.beta));
  }

  Matrix base_off(n, n);
  for (int x = 0; x < n; ++x) {
    for (int y = 0; y < n; ++y) {
      base_off(x, y) = (x == y) ? 0.0 : alpha_sum(x, y) / mu.weights(x);
    }
  }
  Generator base = Generator::from_offdiagonal(space, base_off);
  if (invariance_residual(base, mu.weights) > 1e-12)
    throw Error("cycle_family: constructed base fails the invariance residual check");

  Matrix kernel(n, n);
  for (int x = 0; x < n; ++x) {
    for (int y = 0; y < n; ++y) {
      kernel(x, y) = (x == y) ? 0.0
                              : -f.values(x) * base.rate(x, y) + beta_sum(x, y) / mu.weights(x);
    }
  }

  PerturbationFamily fam;
  fam.kind = FamilyKind::Cycle;
  fam.base = base;
  fam.mu0 = mu;
  fam.direction = f;
  fam.kernel = ResponseKernel::from_offdiagonal(space, std::move(kernel));
  fam.delta_cap = cap;
  fam.cap_inclusive = true;
  Vector fv = f.values;
  Vector muw = mu.weights;
  fam.offdiag_rates_at = [alpha_sum, beta_sum, fv, muw, n](double delta) {
    Matrix out(n, n);
    for (int x = 0; x < n; ++x) {
      double scale = std::exp(-delta * fv(x));
      for (int y = 0; y < n; ++y) {
        double weight = alpha_sum(x, y) + delta * beta_sum(x, y);
        // At the inclusive cap a weight is exactly zero in exact arithmetic;
        // absorb the last-ulp rounding of alpha + delta*beta.
        if (weight < 0.0 && weight > -16.0 * std::numeric_limits<double>::epsilon() *
                                         std::abs(alpha_sum(x, y))) {
          weight = 0.0;
        }
        out(x, y) = (x == y) ? 0.0 : scale * (weight / muw(x));
      }
    }
    return out;
  };
  return fam;
}

HamiltonianGraph HamiltonianGraph::make(const StateSpace& space,
                                        std::vector<std::pair<int, int>> edges,
                                        Observable H) {
  require_same_space(space, H.space, "hamiltonian graph");
  for (auto& [x, y] : edges) {
    if (x < 0 || x >= space.size() || y < 0 || y >= space.size())
      throw ValidationError("edge references a state outside the space");
    if (x == y) throw ValidationError("self-loop edge at state " + space.labels[x]);
  }
  return HamiltonianGraph{space, std::move(edges), std::move(H)};
}

bool HamiltonianGraph::has_edge(int x, int y) const {
  for (const auto& [a, b] : edges) {
    if ((a == x && b == y) || (a == y && b == x)) return true;
  }
  return false;
}

bool HamiltonianGraph::connected() const {
  int n = space.size();
  std::vector<std::vector<int>> adj(n);
  for (const auto& [a, b] : edges) {
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  std::vector<bool> seen(n, false);
  std::queue<int> queue;
  queue.push(0);
  seen[0] = true;
  int reached = 1;
  while (!queue.empty()) {
    int v = queue.front();
    queue.pop();
    for (int w : adj[v]) {
      if (!seen[w]) {
        seen[w] = true;
        ++reached;
        queue.push(w);
      }
    }
  }
  return reached == n;
}

namespace {

// min(1, e^{-u}) without overflow for very negative u.
double metropolis_rate(double u) { return u >= 0.0 ? std::exp(-u) : 1.0; }

// 1/(1 + e^{u}) evaluated stably.
double logistic_rate(double u) {
  if (u >= 0.0) {
    double e = std::exp(-u);
    return e / (1.0 + e);
  }
  return 1.0 / (1.0 + std::exp(u));
}

Matrix edge_adjacency(const HamiltonianGraph& hg) {
  int n = hg.space.size();
  Matrix adj = Matrix::Zero(n, n);
  for (const auto& [a, b] : hg.edges) {
    adj(a, b) = 1.0;
    adj(b, a) = 1.0;
  }
  return adj;
}

Measure gibbs_measure(const HamiltonianGraph& hg) {
  Vector h = hg.H.values;
  double hmin = h.minCoeff();
  Vector w = (-(h.array() - hmin)).exp().matrix();
  w /= w.sum();
  return Measure{hg.space, std::move(w), true};
}

PerturbationFamily hamiltonian_family(const HamiltonianGraph& hg, const Observable& f,
                                      const Tolerances& tol, bool metropolis) {
  require_same_space(hg.space, f.space, "hamiltonian family");
  if (!hg.connected())
    throw Disconnected("hamiltonian graph is not connected; the chain would be reducible");

  int n = hg.space.size();
  Matrix adj = edge_adjacency(hg);
  Vector h = hg.H.values;
  Vector fv = f.values;

  auto rates_for = [adj, h, fv, n, metropolis](double delta) {
    Matrix out(n, n);
    for (int x = 0; x < n; ++x) {
      for (int y = 0; y < n; ++y) {
        if (x == y || adj(x, y) == 0.0) {
          out(x, y) = 0.0;
        } else {
          double du = (h(y) - delta * fv(y)) - (h(x) - delta * fv(x));
          out(x, y) = metropolis ? metropolis_rate(du) : logistic_rate(du);
        }
      }
    }
    return out;
  };

  Matrix kernel = Matrix::Zero(n, n);
  for (int x = 0; x < n; ++x) {
    for (int y = 0; y < n; ++y) {
      if (x == y || adj(x, y) == 0.0) continue;
      double dh = h(y) - h(x);
      double df = fv(y) - fv(x);
      if (metropolis) {
        if (dh > tol.metropolis_tie) {
          kernel(x, y) = df * std::exp(-dh);
        } else if (std::abs(dh) <= tol.metropolis_tie && fv(x) > fv(y)) {
          kernel(x, y) = df * std::exp(-dh);
        }
      } else {
        double p = logistic_rate(dh);
        kernel(x, y) = df * p * (1.0 - p);
      }
    }
  }

  PerturbationFamily fam;
  fam.kind = metropolis ? FamilyKind::Metropolis : FamilyKind::Glauber;
  fam.base = Generator::from_offdiagonal(hg.space, rates_for(0.0));
  fam.mu0 = gibbs_measure(hg);
  fam.direction = f;
  fam.kernel = ResponseKernel::from_offdiagonal(hg.space, std::move(kernel));
  fam.offdiag_rates_at = rates_for;

  double res = invariance_residual(fam.base, fam.mu0.weights);
  if (res > tol.invariance_precheck)
    throw NotInvariant("hamiltonian family: Gibbs measure fails the invariance check");
  return fam;
}

}  // namespace

PerturbationFamily metropolis_family(const HamiltonianGraph& hg, const Observable& f,
                                     const Tolerances& tol) {
  return hamiltonian_family(hg, f, tol, true);
}

PerturbationFamily glauber_family(const HamiltonianGraph& hg, const Observable& f,
                                  const Tolerances& tol) {
  return hamiltonian_family(hg, f, tol, false);
}

PerturbationFamily with_kernel(PerturbationFamily fam, ResponseKernel kernel) {
  require_same_space(fam.base.space(), kernel.space(), "with_kernel");
  fam.kernel = std::move(kernel);
  return fam;
}

Observable shift_to_nonnegative(const Observable& f) {
  return Observable{f.space, f.values.array() - f.values.minCoeff()};
}

std::vector<FamilyCheckRow> verify_family(const PerturbationFamily& fam,
                                          const std::vector<double>& deltas,
                                          const Tolerances& tol) {
  std::vector<FamilyCheckRow> rows;
  rows.reserve(deltas.size());
  for (double delta : deltas) {
    FamilyCheckRow row;
    row.delta = delta;
    if (!fam.admissible(delta)) {
      std::ostringstream msg;
      msg << "verify_family: delta " << delta << " exceeds the cap " << fam.delta_cap;
      throw DeltaTooLarge(msg.str(), delta, fam.delta_cap);
    }
    try {
      Generator pert = fam.generator_at(delta);
      row.generator_ok = true;
      row.invariance_residual = invariance_residual(pert, fam.perturbed_weights(delta));
      if (fam.kind == FamilyKind::Metropolis || fam.kind == FamilyKind::Glauber) {
        Vector w = fam.perturbed_weights(delta);
        Measure pm{fam.mu0.space, w / w.sum(), true};
        row.reversibility_residual = reversibility_residual(pert, pm);
      }
    } catch (const NegativeRate&) {
      row.generator_ok = false;
    }
    rows.push_back(std::move(row));
  }
  (void)tol;
  return rows;
}

}  // namespace fdtlab
