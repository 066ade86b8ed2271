#pragma once

#include <random>
#include <vector>

#include "fdtlab/generator.hpp"
#include "fdtlab/markov_ops.hpp"

namespace fdtlab::testing {

inline std::mt19937_64 make_rng(uint64_t seed) { return std::mt19937_64(seed); }

inline Generator make_two_state(double a, double b) {
  auto space = StateSpace::with_count(2);
  return build_generator(space, {{0, 1, a}, {1, 0, b}});
}

/// Unidirectional cycle 0 -> 1 -> ... -> n-1 -> 0 with unit rates.
inline Generator make_cycle(int n, double rate = 1.0) {
  auto space = StateSpace::with_count(n);
  std::vector<RateEntry> entries;
  for (int i = 0; i < n; ++i) entries.push_back({i, (i + 1) % n, rate});
  return build_generator(space, entries);
}

/// Symmetric nearest-neighbor ring.
inline Generator make_ring(int n, double rate = 1.0) {
  auto space = StateSpace::with_count(n);
  std::vector<RateEntry> entries;
  for (int i = 0; i < n; ++i) {
    entries.push_back({i, (i + 1) % n, rate});
    entries.push_back({(i + 1) % n, i, rate});
  }
  return build_generator(space, entries);
}

inline Observable random_observable(const StateSpace& space, std::mt19937_64& rng,
                                    double lo = -1.0, double hi = 1.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  Vector v(space.size());
  for (int i = 0; i < space.size(); ++i) v(i) = u(rng);
  return Observable::on(space, std::move(v));
}

inline Measure random_probability(const StateSpace& space, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.05, 1.0);
  Vector w(space.size());
  for (int i = 0; i < space.size(); ++i) w(i) = u(rng);
  w /= w.sum();
  return Measure{space, std::move(w), true};
}

/// Random irreducible chain: a random Hamiltonian cycle guarantees strong
/// connectivity, plus extra random edges.
inline Generator random_irreducible_chain(const StateSpace& space, std::mt19937_64& rng,
                                          double rate_scale = 1.0,
                                          double extra_edge_prob = 0.4) {
  int n = space.size();
  std::vector<int> perm(n);
  for (int i = 0; i < n; ++i) perm[i] = i;
  std::shuffle(perm.begin(), perm.end(), rng);
  std::uniform_real_distribution<double> rate(0.3, 1.5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Matrix m = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) m(perm[i], perm[(i + 1) % n]) = rate_scale * rate(rng);
  for (int x = 0; x < n; ++x) {
    for (int y = 0; y < n; ++y) {
      if (x != y && m(x, y) == 0.0 && u(rng) < extra_edge_prob)
        m(x, y) = rate_scale * rate(rng);
    }
  }
  return Generator::from_offdiagonal(space, std::move(m));
}

/// Random reversible chain via symmetric conductances over a connected graph:
/// c(x,y) = w(x,y)/mu(x) with w symmetric gives detailed balance for mu.
inline Generator random_reversible_chain(const StateSpace& space, std::mt19937_64& rng,
                                         Measure* mu_out = nullptr,
                                         double extra_edge_prob = 0.4) {
  int n = space.size();
  Measure mu = random_probability(space, rng);
  std::uniform_real_distribution<double> cond(0.2, 1.0);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Matrix w = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    int j = (i + 1) % n;
    w(i, j) = w(j, i) = cond(rng);
  }
  for (int x = 0; x < n; ++x) {
    for (int y = x + 1; y < n; ++y) {
      if (w(x, y) == 0.0 && u(rng) < extra_edge_prob) w(x, y) = w(y, x) = cond(rng);
    }
  }
  Matrix m = Matrix::Zero(n, n);
  for (int x = 0; x < n; ++x) {
    for (int y = 0; y < n; ++y) {
      if (x != y && w(x, y) > 0.0) m(x, y) = w(x, y) / mu.weights(x);
    }
  }
  if (mu_out) *mu_out = mu;
  return Generator::from_offdiagonal(space, std::move(m));
}

}  // namespace fdtlab::testing
