#pragma once

#include "daelti/linalg.hpp"

namespace daelti {

/// Sampled state/input pair. Column j of x and u belongs to times(j).
struct Trajectory {
  Vector times;
  Matrix x;
  Matrix u;

  Index size() const { return times.size(); }

  /// Throws GridError unless times is strictly increasing and the sample
  /// counts match.
  void validate() const;
};

/// steps + 1 equally spaced nodes from t0 to t1.
Vector uniform_grid(double t0, double t1, Index steps);

/// Step of a uniform grid. Throws GridError if the grid has fewer than two
/// nodes or is not uniform to 1e-9 relative.
double uniform_step(const Vector& times);

/// Composite Simpson rule for samples f(0..N-1) spaced h apart; an odd
/// number of intervals ends with the 3/8 rule, a single interval uses the
/// trapezoid.
double simpson_integral(const Vector& f, double h);

}  // namespace daelti
