#include "daelti/trajectory.hpp"

#include "daelti/errors.hpp"

#include <cmath>

namespace daelti {

void Trajectory::validate() const {
  if (x.cols() != times.size() || u.cols() != times.size()) {
    throw GridError("trajectory: sample count does not match grid length");
  }
  for (Index i = 1; i < times.size(); ++i) {
    if (!(times(i) > times(i - 1))) throw GridError("trajectory: times must be strictly increasing");
  }
}

Vector uniform_grid(double t0, double t1, Index steps) {
  if (steps < 1) throw GridError("uniform_grid: need at least one step");
  if (!(t1 > t0)) throw GridError("uniform_grid: end time must exceed start time");
  Vector t(steps + 1);
  const double h = (t1 - t0) / static_cast<double>(steps);
  for (Index i = 0; i <= steps; ++i) t(i) = t0 + h * static_cast<double>(i);
  t(steps) = t1;
  return t;
}

double uniform_step(const Vector& times) {
  if (times.size() < 2) throw GridError("grid needs at least two nodes");
  const Index steps = times.size() - 1;
  const double h = (times(steps) - times(0)) / static_cast<double>(steps);
  if (!(h > 0.0)) throw GridError("grid must be increasing");
  for (Index i = 1; i < times.size(); ++i) {
    if (std::abs((times(i) - times(i - 1)) - h) > 1e-9 * std::max(h, std::abs(times(i)))) {
      throw GridError("grid is not uniform");
    }
  }
  return h;
}

double simpson_integral(const Vector& f, double h) {
  const Index intervals = f.size() - 1;
  if (intervals < 1) return 0.0;
  if (intervals == 1) return 0.5 * h * (f(0) + f(1));
  const Index simpson_end = intervals % 2 == 0 ? intervals : intervals - 3;
  double total = 0.0;
  for (Index i = 0; i + 2 <= simpson_end; i += 2) total += h / 3.0 * (f(i) + 4.0 * f(i + 1) + f(i + 2));
  if (simpson_end < intervals) {
    const Index i = simpson_end;
    total += 3.0 * h / 8.0 * (f(i) + 3.0 * f(i + 1) + 3.0 * f(i + 2) + f(i + 3));
  }
  return total;
}

}  // namespace daelti
