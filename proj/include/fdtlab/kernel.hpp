#pragma once

#include "fdtlab/types.hpp"

namespace fdtlab {

/// Response kernel in jump form: off-diagonal entries a(x,y) of either sign,
/// diagonal forced so every row sums to zero. Acting on an observable,
/// (A g)(x) = sum_y a(x,y) (g(y) - g(x)), so A annihilates constants.
class ResponseKernel {
 public:
  ResponseKernel() = default;

  /// The diagonal of the argument is ignored and recomputed.
  static ResponseKernel from_offdiagonal(const StateSpace& space, Matrix offdiag);

  const StateSpace& space() const { return space_; }
  const Matrix& matrix() const { return m_; }
  int size() const { return static_cast<int>(m_.rows()); }

  Vector apply(const Vector& g) const;
  Observable apply(const Observable& g) const;

  double row_sum_residual() const;
  /// Operator norm on sup-normed functions: max_x sum_y |a(x,y)|.
  double sup_operator_norm() const;

 private:
  StateSpace space_;
  Matrix m_;
};

}  // namespace fdtlab
