#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "fdtlab/errors.hpp"
#include "fdtlab/tolerances.hpp"

namespace fdtlab {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Finite state space with distinct labels. At least two states.
struct StateSpace {
  std::vector<std::string> labels;

  int size() const { return static_cast<int>(labels.size()); }
  /// Index of a label, -1 if absent.
  int index_of(const std::string& label) const;

  static StateSpace with_count(int n);
  static StateSpace with_labels(std::vector<std::string> names);

  bool operator==(const StateSpace& other) const = default;
};

void require_same_space(const StateSpace& a, const StateSpace& b, const char* what);

/// Real-valued function on a state space.
struct Observable {
  StateSpace space;
  Vector values;

  int size() const { return static_cast<int>(values.size()); }

  static Observable on(const StateSpace& space, Vector values);
  static Observable constant(const StateSpace& space, double value);
  static Observable indicator(const StateSpace& space, int state);
};

Observable operator+(const Observable& a, const Observable& b);
Observable operator-(const Observable& a, const Observable& b);
Observable operator*(double c, const Observable& a);
/// Entrywise product f*g.
Observable pointwise(const Observable& a, const Observable& b);

/// Nonnegative weights on a state space. Outputs of invariant_measure are
/// strictly positive and normalized; initial conditions may put zero mass on
/// some states (e.g. point masses).
struct Measure {
  StateSpace space;
  Vector weights;
  bool normalized = false;

  int size() const { return static_cast<int>(weights.size()); }
  double total() const { return weights.sum(); }
  bool strictly_positive() const { return weights.minCoeff() > 0.0; }
  bool is_probability(double tol) const;
  Measure normalized_copy() const;

  static Measure on(const StateSpace& space, Vector weights);
  static Measure uniform(const StateSpace& space);
  static Measure point(const StateSpace& space, int state);
};

/// <g>_nu = sum_x nu(x) g(x).
double expectation(const Measure& nu, const Observable& g);
double expectation(const Measure& nu, const Vector& g);

double sup_norm(const Vector& v);
/// Weighted L2 norm sqrt(sum_x mu(x) v(x)^2).
double l2_norm(const Measure& mu, const Vector& v);

/// Least-squares fit of log(y) against log(x), ignoring points with y <= floor.
/// points_used < 2 means the fit is undefined (slope = NaN).
struct SlopeFit {
  double slope = std::numeric_limits<double>::quiet_NaN();
  double intercept = std::numeric_limits<double>::quiet_NaN();
  int points_used = 0;
};

SlopeFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y, double floor);
/// Fit of log(y) against x (geometric decay rate = -slope).
SlopeFit fit_semilog(const std::vector<double>& x, const std::vector<double>& y, double floor);

}  // namespace fdtlab
