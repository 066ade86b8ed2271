#pragma once

#include <vector>

#include "fdtlab/types.hpp"

namespace fdtlab {

/// One off-diagonal rate c(from, to).
struct RateEntry {
  int from;
  int to;
  double rate;
};

/// Rate matrix of a finite-state CTMC: off-diagonal entries nonnegative,
/// rows summing to zero.
class Generator {
 public:
  Generator() = default;

  /// Validates an explicit full matrix (diagonal included).
  static Generator from_matrix(const StateSpace& space, Matrix rates,
                               const Tolerances& tol = default_tolerances());
  /// Takes off-diagonal entries and fills the diagonal so rows sum to zero
  /// exactly. The diagonal of the argument is ignored.
  static Generator from_offdiagonal(const StateSpace& space, Matrix offdiag);

  const StateSpace& space() const { return space_; }
  const Matrix& matrix() const { return m_; }
  int size() const { return static_cast<int>(m_.rows()); }
  double rate(int x, int y) const { return m_(x, y); }

  /// max_x |c(x,x)|, the uniformization rate.
  double uniformization_rate() const;
  double row_sum_residual() const;

  Vector apply(const Vector& g) const { return m_ * g; }
  Observable apply(const Observable& g) const;

 private:
  StateSpace space_;
  Matrix m_;
};

/// Builds a generator from a sparse off-diagonal rate list; the diagonal is
/// filled so each row sums to zero.
Generator build_generator(const StateSpace& space, const std::vector<RateEntry>& rates);

}  // namespace fdtlab
