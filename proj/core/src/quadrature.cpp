#include "daelti/quadrature.hpp"

#include "daelti/errors.hpp"

#include <cmath>
#include <numbers>
#include <utility>

namespace daelti {

Vector legendre_values(Index degree, double x) {
  Vector p(degree + 1);
  p(0) = 1.0;
  if (degree >= 1) p(1) = x;
  for (Index k = 1; k < degree; ++k) {
    p(k + 1) = ((2.0 * k + 1.0) * x * p(k) - static_cast<double>(k) * p(k - 1)) / (k + 1.0);
  }
  return p;
}

QuadratureRule gauss_legendre(Index n) {
  if (n < 1) throw ShapeError("gauss_legendre: need at least one node");
  QuadratureRule rule{Vector(n), Vector(n)};
  const double nn = static_cast<double>(n);
  // Returns (P_n(x), P_n'(x)).
  auto eval = [n, nn](double x) {
    double p0 = 1.0;
    double p1 = x;
    for (Index k = 1; k < n; ++k) {
      const double p2 = ((2.0 * k + 1.0) * x * p1 - static_cast<double>(k) * p0) / (k + 1.0);
      p0 = p1;
      p1 = p2;
    }
    return std::pair<double, double>{p1, nn * (x * p1 - p0) / (x * x - 1.0)};
  };
  for (Index i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (nn + 0.5));
    for (int it = 0; it < 100; ++it) {
      const auto [p, dp] = eval(x);
      const double dx = p / dp;
      x -= dx;
      if (std::abs(dx) <= 1e-15) break;
    }
    const double dp = eval(x).second;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes(i) = -x;
    rule.nodes(n - 1 - i) = x;
    rule.weights(i) = w;
    rule.weights(n - 1 - i) = w;
  }
  if (n % 2 == 1) rule.nodes(n / 2) = 0.0;
  return rule;
}

}  // namespace daelti
