#include "fdtlab/types.hpp"

#include <cmath>
#include <set>
#include <sstream>

namespace fdtlab {

int StateSpace::index_of(const std::string& label) const {
  for (int i = 0; i < size(); ++i) {
    if (labels[i] == label) return i;
  }
  return -1;
}

StateSpace StateSpace::with_count(int n) {
  if (n < 2) throw ValidationError("state space needs at least 2 states");
  std::vector<std::string> names;
  names.reserve(n);
  for (int i = 0; i < n; ++i) names.push_back("s" + std::to_string(i));
  return StateSpace{std::move(names)};
}

StateSpace StateSpace::with_labels(std::vector<std::string> names) {
  if (names.size() < 2) throw ValidationError("state space needs at least 2 states");
  std::set<std::string> seen;
  for (const auto& name : names) {
    if (!seen.insert(name).second)
      throw ValidationError("duplicate state label '" + name + "'");
  }
  return StateSpace{std::move(names)};
}

void require_same_space(const StateSpace& a, const StateSpace& b, const char* what) {
  if (!(a == b)) {
    std::ostringstream msg;
    msg << what << ": state spaces differ (" << a.size() << " vs " << b.size() << " states)";
    throw ValidationError(msg.str());
  }
}

Observable Observable::on(const StateSpace& space, Vector values) {
  if (values.size() != space.size())
    throw ValidationError("observable length does not match state space");
  if (!values.allFinite()) throw ValidationError("observable has non-finite values");
  return Observable{space, std::move(values)};
}

Observable Observable::constant(const StateSpace& space, double value) {
  return Observable{space, Vector::Constant(space.size(), value)};
}

Observable Observable::indicator(const StateSpace& space, int state) {
  if (state < 0 || state >= space.size())
    throw ValidationError("indicator state out of range");
  Vector v = Vector::Zero(space.size());
  v(state) = 1.0;
  return Observable{space, std::move(v)};
}

Observable operator+(const Observable& a, const Observable& b) {
  require_same_space(a.space, b.space, "observable sum");
  return Observable{a.space, a.values + b.values};
}

Observable operator-(const Observable& a, const Observable& b) {
  require_same_space(a.space, b.space, "observable difference");
  return Observable{a.space, a.values - b.values};
}

Observable operator*(double c, const Observable& a) {
  return Observable{a.space, c * a.values};
}

Observable pointwise(const Observable& a, const Observable& b) {
  require_same_space(a.space, b.space, "pointwise product");
  return Observable{a.space, a.values.cwiseProduct(b.values)};
}

bool Measure::is_probability(double tol) const {
  return std::abs(total() - 1.0) <= tol;
}

Measure Measure::normalized_copy() const {
  double z = total();
  if (z <= 0.0) throw ValidationError("cannot normalize a measure with zero mass");
  return Measure{space, weights / z, true};
}

Measure Measure::on(const StateSpace& space, Vector weights) {
  if (weights.size() != space.size())
    throw ValidationError("measure length does not match state space");
  if (!weights.allFinite()) throw ValidationError("measure has non-finite weights");
  if (weights.minCoeff() < 0.0) throw ValidationError("measure has negative weights");
  return Measure{space, std::move(weights), false};
}

Measure Measure::uniform(const StateSpace& space) {
  return Measure{space, Vector::Constant(space.size(), 1.0 / space.size()), true};
}

Measure Measure::point(const StateSpace& space, int state) {
  if (state < 0 || state >= space.size())
    throw ValidationError("point mass state out of range");
  Vector w = Vector::Zero(space.size());
  w(state) = 1.0;
  return Measure{space, std::move(w), true};
}

double expectation(const Measure& nu, const Observable& g) {
  require_same_space(nu.space, g.space, "expectation");
  return nu.weights.dot(g.values);
}

double expectation(const Measure& nu, const Vector& g) {
  if (nu.weights.size() != g.size())
    throw ValidationError("expectation: vector length mismatch");
  return nu.weights.dot(g);
}

double sup_norm(const Vector& v) { return v.cwiseAbs().maxCoeff(); }

double l2_norm(const Measure& mu, const Vector& v) {
  if (mu.weights.size() != v.size())
    throw ValidationError("l2_norm: vector length mismatch");
  return std::sqrt(mu.weights.dot(v.cwiseAbs2()));
}

namespace {

SlopeFit fit_linear(const std::vector<double>& x, const std::vector<double>& y) {
  SlopeFit fit;
  int n = static_cast<int>(x.size());
  fit.points_used = n;
  if (n < 2) return fit;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int i = 0; i < n; ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  double denom = n * sxx - sx * sx;
  if (denom == 0) return fit;
  fit.slope = (n * sxy - sx * sy) / denom;
  fit.intercept = (sy - fit.slope * sx) / n;
  return fit;
}

}  // namespace

SlopeFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y, double floor) {
  std::vector<double> lx, ly;
  for (size_t i = 0; i < x.size() && i < y.size(); ++i) {
    if (y[i] > floor && x[i] > 0) {
      lx.push_back(std::log(x[i]));
      ly.push_back(std::log(y[i]));
    }
  }
  return fit_linear(lx, ly);
}

SlopeFit fit_semilog(const std::vector<double>& x, const std::vector<double>& y, double floor) {
  std::vector<double> lx, ly;
  for (size_t i = 0; i < x.size() && i < y.size(); ++i) {
    if (y[i] > floor) {
      lx.push_back(x[i]);
      ly.push_back(std::log(y[i]));
    }
  }
  return fit_linear(lx, ly);
}

}  // namespace fdtlab
