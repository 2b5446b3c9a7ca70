#pragma once

#include "daelti/linalg.hpp"

namespace daelti {

/// Gauss-Legendre rule on [-1, 1]: exact for polynomials of degree 2n-1.
struct QuadratureRule {
  Vector nodes;
  Vector weights;
};

QuadratureRule gauss_legendre(Index n);

/// Values P_0(x), ..., P_degree(x) of the Legendre polynomials.
Vector legendre_values(Index degree, double x);

}  // namespace daelti
