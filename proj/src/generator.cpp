#include "fdtlab/generator.hpp"

#include <set>
#include <sstream>

namespace fdtlab {

namespace {

std::string edge_str(const StateSpace& space, int x, int y) {
  std::ostringstream s;
  s << "(" << space.labels[x] << ", " << space.labels[y] << ")";
  return s.str();
}

}  // namespace

Generator Generator::from_matrix(const StateSpace& space, Matrix rates,
                                 const Tolerances& tol) {
  int n = space.size();
  if (rates.rows() != n || rates.cols() != n)
    throw ValidationError("rate matrix shape does not match state space");
  if (!rates.allFinite()) throw ValidationError("rate matrix has non-finite entries");
  for (int x = 0; x < n; ++x) {
    for (int y = 0; y < n; ++y) {
      if (x != y && rates(x, y) < 0.0)
        throw NegativeRate("negative rate at " + edge_str(space, x, y));
    }
    double row = rates.row(x).sum();
    if (std::abs(row) > tol.generator_row_sum) {
      std::ostringstream msg;
      msg << "row " << space.labels[x] << " sums to " << row << " instead of 0";
      throw ValidationError(msg.str());
    }
  }
  Generator L;
  L.space_ = space;
  L.m_ = std::move(rates);
  return L;
}

Generator Generator::from_offdiagonal(const StateSpace& space, Matrix offdiag) {
  int n = space.size();
  if (offdiag.rows() != n || offdiag.cols() != n)
    throw ValidationError("rate matrix shape does not match state space");
  if (!offdiag.allFinite()) throw ValidationError("rate matrix has non-finite entries");
  for (int x = 0; x < n; ++x) {
    offdiag(x, x) = 0.0;
    for (int y = 0; y < n; ++y) {
      if (x != y && offdiag(x, y) < 0.0)
        throw NegativeRate("negative rate at " + edge_str(space, x, y));
    }
    offdiag(x, x) = -offdiag.row(x).sum();
  }
  Generator L;
  L.space_ = space;
  L.m_ = std::move(offdiag);
  return L;
}

double Generator::uniformization_rate() const {
  return m_.diagonal().cwiseAbs().maxCoeff();
}

double Generator::row_sum_residual() const {
  return m_.rowwise().sum().cwiseAbs().maxCoeff();
}

Observable Generator::apply(const Observable& g) const {
  require_same_space(space_, g.space, "generator application");
  return Observable{space_, m_ * g.values};
}

Generator build_generator(const StateSpace& space, const std::vector<RateEntry>& rates) {
  int n = space.size();
  Matrix m = Matrix::Zero(n, n);
  std::set<std::pair<int, int>> seen;
  for (const auto& e : rates) {
    if (e.from < 0 || e.from >= n || e.to < 0 || e.to >= n)
      throw ValidationError("rate entry indexes a state outside the space");
    if (e.from == e.to)
      throw SelfLoop("self-loop rate at state " + space.labels[e.from]);
    if (!seen.insert({e.from, e.to}).second)
      throw DuplicateEntry("duplicate rate entry at " + edge_str(space, e.from, e.to));
    if (!(e.rate >= 0.0))
      throw NegativeRate("negative rate at " + edge_str(space, e.from, e.to));
    m(e.from, e.to) = e.rate;
  }
  return Generator::from_offdiagonal(space, std::move(m));
}

}  // namespace fdtlab
