#include "fdtlab/markov_ops.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <algorithm>
#include <cmath>
#include <sstream>

namespace fdtlab {

int strong_component_count(const Matrix& rates) {
  int n = static_cast<int>(rates.rows());
  std::vector<std::vector<int>> adj(n);
  for (int x = 0; x < n; ++x) {
    for (int y = 0; y < n; ++y) {
      if (x != y && rates(x, y) > 0.0) adj[x].push_back(y);
    }
  }

  // Tarjan with an explicit stack.
  std::vector<int> index(n, -1), low(n, 0);
  std::vector<bool> on_stack(n, false);
  std::vector<int> stack;
  int next_index = 0;
  int components = 0;

  struct Frame {
    int v;
    size_t child;
  };
  std::vector<Frame> call;
  for (int root = 0; root < n; ++root) {
    if (index[root] != -1) continue;
    index[root] = low[root] = next_index++;
    stack.push_back(root);
    on_stack[root] = true;
    call.push_back({root, 0});
    while (!call.empty()) {
      Frame& f = call.back();
      if (f.child < adj[f.v].size()) {
        int w = adj[f.v][f.child++];
        if (index[w] == -1) {
          index[w] = low[w] = next_index++;
          stack.push_back(w);
          on_stack[w] = true;
          call.push_back({w, 0});
        } else if (on_stack[w]) {
          low[f.v] = std::min(low[f.v], index[w]);
        }
      } else {
        if (low[f.v] == index[f.v]) {
          ++components;
          int w;
          do {
            w = stack.back();
            stack.pop_back();
            on_stack[w] = false;
          } while (w != f.v);
        }
        int v = f.v;
        call.pop_back();
        if (!call.empty()) low[call.back().v] = std::min(low[call.back().v], low[v]);
      }
    }
  }
  return components;
}

bool is_irreducible(const Generator& L) {
  return strong_component_count(L.matrix()) == 1;
}

double invariance_residual(const Generator& L, const Vector& w) {
  if (w.size() != L.size()) throw ValidationError("invariance_residual: length mismatch");
  return (w.transpose() * L.matrix()).cwiseAbs().maxCoeff();
}

Measure invariant_measure(const Generator& L, const Tolerances& tol) {
  int n = L.size();
  if (strong_component_count(L.matrix()) != 1)
    throw Reducible("jump graph is not strongly connected");

  Matrix A = L.matrix().transpose();
  A.row(0).setOnes();
  Vector rhs = Vector::Zero(n);
  rhs(0) = 1.0;
  Eigen::PartialPivLU<Matrix> lu(A);
  Vector mu = lu.solve(rhs);
  for (int pass = 0; pass < 2; ++pass) {
    Vector r = rhs - A * mu;
    mu += lu.solve(r);
  }
  mu /= mu.sum();

  if (!(mu.minCoeff() > 0.0))
    throw Error("invariant measure is not strictly positive (chain numerically degenerate)");
  double res = invariance_residual(L, mu);
  if (res > tol.invariant_residual) {
    std::ostringstream msg;
    msg << "invariant measure residual " << res << " exceeds " << tol.invariant_residual;
    throw Error(msg.str());
  }
  return Measure{L.space(), std::move(mu), true};
}

double reversibility_residual(const Generator& L, const Measure& mu0) {
  require_same_space(L.space(), mu0.space, "reversibility_residual");
  int n = L.size();
  double worst = 0.0;
  for (int x = 0; x < n; ++x) {
    for (int y = x + 1; y < n; ++y) {
      double d = std::abs(mu0.weights(x) * L.rate(x, y) - mu0.weights(y) * L.rate(y, x));
      worst = std::max(worst, d);
    }
  }
  return worst;
}

bool is_reversible(const Generator& L, const Measure& mu0, const Tolerances& tol) {
  return reversibility_residual(L, mu0) <= tol.reversibility;
}

namespace {

void require_invariant(const Generator& L, const Measure& mu0, const Tolerances& tol,
                       const char* what) {
  require_same_space(L.space(), mu0.space, what);
  if (!mu0.strictly_positive()) {
    throw ValidationError(std::string(what) + " needs a strictly positive measure");
  }
  double res = invariance_residual(L, mu0.weights / mu0.total());
  if (res > tol.invariance_precheck) {
    std::ostringstream msg;
    msg << what << ": measure is not invariant (residual " << res << ")";
    throw NotInvariant(msg.str());
  }
}

}  // namespace

Generator adjoint(const Generator& L, const Measure& mu0, const Tolerances& tol) {
  require_invariant(L, mu0, tol, "adjoint");
  int n = L.size();
  Matrix rev = Matrix::Zero(n, n);
  for (int x = 0; x < n; ++x) {
    for (int y = 0; y < n; ++y) {
      if (x != y) rev(x, y) = mu0.weights(y) * L.rate(y, x) / mu0.weights(x);
    }
  }
  return Generator::from_offdiagonal(L.space(), std::move(rev));
}

Generator symmetrize(const Generator& L, const Measure& mu0, const Tolerances& tol) {
  Generator star = adjoint(L, mu0, tol);
  Matrix avg = 0.5 * (L.matrix() + star.matrix());
  return Generator::from_offdiagonal(L.space(), std::move(avg));
}

Observable carre_du_champ(const Generator& L, const Observable& f, const Observable& g) {
  require_same_space(L.space(), f.space, "carre_du_champ");
  require_same_space(L.space(), g.space, "carre_du_champ");
  Vector fg = f.values.cwiseProduct(g.values);
  Vector out = L.apply(fg) - f.values.cwiseProduct(L.apply(g.values)) -
               g.values.cwiseProduct(L.apply(f.values));
  return Observable{L.space(), std::move(out)};
}

SpectralGapInfo spectral_gap_info(const Generator& L) {
  Eigen::EigenSolver<Matrix> solver(L.matrix());
  if (solver.info() != Eigen::Success)
    throw Error("eigenvalue computation failed");
  const auto& ev = solver.eigenvalues();
  double scale = std::max(1.0, L.uniformization_rate());
  double zero_thresh = 1e-9 * scale;

  SpectralGapInfo info;
  info.gap = std::numeric_limits<double>::infinity();
  int gap_index = -1;
  for (int i = 0; i < ev.size(); ++i) {
    double rate = -ev(i).real();
    if (rate > zero_thresh && rate < info.gap) {
      info.gap = rate;
      gap_index = i;
    }
  }
  if (gap_index < 0) throw Error("no nonzero eigenvalue found for spectral gap");

  info.real = std::abs(ev(gap_index).imag()) <= zero_thresh;
  int near = 0;
  for (int i = 0; i < ev.size(); ++i) {
    double rate = -ev(i).real();
    if (rate > zero_thresh && std::abs(rate - info.gap) <= 0.05 * info.gap) ++near;
  }
  info.simple = (near == 1);
  return info;
}

double spectral_gap(const Generator& L) { return spectral_gap_info(L).gap; }

}  // namespace fdtlab
