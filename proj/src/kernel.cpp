#include "fdtlab/kernel.hpp"

namespace fdtlab {

ResponseKernel ResponseKernel::from_offdiagonal(const StateSpace& space, Matrix offdiag) {
  int n = space.size();
  if (offdiag.rows() != n || offdiag.cols() != n)
    throw ValidationError("kernel shape does not match state space");
  if (!offdiag.allFinite()) throw ValidationError("kernel has non-finite entries");
  for (int x = 0; x < n; ++x) {
    offdiag(x, x) = 0.0;
    offdiag(x, x) = -offdiag.row(x).sum();
  }
  ResponseKernel k;
  k.space_ = space;
  k.m_ = std::move(offdiag);
  return k;
}

Vector ResponseKernel::apply(const Vector& g) const {
  if (g.size() != m_.rows()) throw ValidationError("kernel application: length mismatch");
  return m_ * g;
}

Observable ResponseKernel::apply(const Observable& g) const {
  require_same_space(space_, g.space, "kernel application");
  return Observable{space_, m_ * g.values};
}

double ResponseKernel::row_sum_residual() const {
  return m_.rowwise().sum().cwiseAbs().maxCoeff();
}

double ResponseKernel::sup_operator_norm() const {
  return m_.cwiseAbs().rowwise().sum().maxCoeff();
}

}  // namespace fdtlab
