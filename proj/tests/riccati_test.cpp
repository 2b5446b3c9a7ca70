#include "daelti/errors.hpp"
#include "daelti/quadrature.hpp"
#include "daelti/riccati.hpp"
#include "daelti/schur.hpp"

#include <gtest/gtest.h>

#include "test_support.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <numbers>

using namespace daelti;
namespace dt = daelti::testing;
using dt::Gen;

TEST(Schur, ReorderKeepsFactorization) {
  Gen g(21);
  for (int t = 0; t < 50; ++t) {
    const Index n = g.index(1, 8);
    const Matrix A = g.matrix(n, n);
    ComplexSchurForm f = complex_schur(A);
    const Index s = reorder_schur(f, [](std::complex<double> l) { return l.real() < 0.0; });
    const ComplexMatrix recon = f.U * f.T * f.U.adjoint();
    EXPECT_LE((recon.real() - A).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LE((f.U.adjoint() * f.U - ComplexMatrix::Identity(n, n)).cwiseAbs().maxCoeff(), 1e-12);
    for (Index i = 0; i < n; ++i) {
      EXPECT_EQ(f.T(i, i).real() < 0.0, i < s);
      for (Index j = 0; j < i; ++j) EXPECT_EQ(f.T(i, j), std::complex<double>(0.0));
    }
  }
}

TEST(Schur, StableSubspaceIsInvariant) {
  Gen g(22);
  for (int t = 0; t < 50; ++t) {
    const Index n = g.index(1, 8);
    const Matrix A = 2.0 * g.matrix(n, n);
    const Subspace S = stable_invariant_subspace(A);
    Eigen::EigenSolver<Matrix> es(A, false);
    const Index stable = (es.eigenvalues().real().array() < -1e-9).count();
    EXPECT_EQ(S.dim(), stable);
    for (Index j = 0; j < S.dim(); ++j) EXPECT_LE(S.distance(A * S.basis().col(j)), 1e-10);
    if (S.dim() > 0) {
      const Matrix restricted = S.basis().transpose() * A * S.basis();
      EXPECT_LT(spectral_abscissa(restricted), 0.0);
    }
  }
}

TEST(Schur, MarginalEigenvaluesAreNotStable) {
  Matrix A(3, 3);
  A << 0, 1, 0, -1, 0, 0, 0, 0, -2;
  const Subspace S = stable_invariant_subspace(A);
  ASSERT_EQ(S.dim(), 1);
  EXPECT_NEAR(std::abs(S.basis()(2, 0)), 1.0, 1e-14);
}

TEST(Lyapunov, ScalarClosedForm) {
  Matrix a(1, 1), q(1, 1);
  a << -1.0;
  q << 1.0;
  EXPECT_NEAR(solve_lyapunov(a, q)(0, 0), 0.5, 1e-15);
}

TEST(Lyapunov, RandomStableResidual) {
  Gen g(23);
  for (int t = 0; t < 50; ++t) {
    const Index n = g.index(1, 8);
    const Matrix A = g.stable(n);
    const Matrix Q = g.matrix(n, n);
    const Matrix X = solve_lyapunov(A, Q + Q.transpose());
    EXPECT_LE((A.transpose() * X + X * A + Q + Q.transpose()).cwiseAbs().maxCoeff(),
              1e-10 * std::max(1.0, X.cwiseAbs().maxCoeff()));
  }
}

TEST(Lyapunov, SingularOperatorThrows) {
  Matrix A(2, 2);
  A << 0, 1, -1, 0;
  EXPECT_THROW(solve_lyapunov(A, Matrix::Identity(2, 2)), Error);
}

TEST(Care, ScalarQuadraticRoot) {
  Matrix a(1, 1), b(1, 1), q(1, 1), r(1, 1);
  a << 0;
  b << 1;
  q << 1;
  r << 1;
  const CareSolution s = solve_care(a, b, q, r);
  EXPECT_NEAR(s.P(0, 0), 1.0, 1e-14);
  EXPECT_NEAR(s.K(0, 0), 1.0, 1e-14);
}

TEST(Care, RandomStabilizableInstances) {
  Gen g(24);
  for (int t = 0; t < 50; ++t) {
    const Index n = 5;
    const Index m = g.index(1, 3);
    const Matrix A = g.matrix(n, n) * 2.0;
    const Matrix B = g.matrix(n, m);
    const Matrix C = g.matrix(n, n);
    const Matrix Q = C.transpose() * C + 0.1 * Matrix::Identity(n, n);
    const Matrix R = Matrix::Identity(m, m) + 0.5 * g.matrix(m, m) * g.matrix(m, m).transpose();
    const Matrix Rs = 0.5 * (R + R.transpose());
    const CareSolution s = solve_care(A, B, Q, Rs);
    EXPECT_LE(care_residual(A, B, Q, Rs, s.P), 1e-10 * std::max(1.0, s.P.norm()));
    EXPECT_LT(spectral_abscissa(A - B * s.K), 0.0);
    Eigen::SelfAdjointEigenSolver<Matrix> es(s.P);
    EXPECT_GT(es.eigenvalues().minCoeff(), 0.0);
  }
}

TEST(Care, UnstabilizableStartIsReported) {
  Matrix a(1, 1), b(1, 1), q(1, 1), k(1, 1);
  a << 1;
  b << 0;
  q << 1;
  k << 0;
  EXPECT_THROW(newton_kleinman(a, b, q, k), NoStabilizingStart);
}

TEST(Quadrature, GaussLegendreExactness) {
  for (Index n : {1, 2, 5, 17, 42, 160}) {
    const QuadratureRule r = gauss_legendre(n);
    EXPECT_NEAR(r.weights.sum(), 2.0, 1e-13);
    const Index deg = 2 * n - 2;  // even monomial of top exact even degree
    double s = 0.0;
    for (Index i = 0; i < n; ++i) s += r.weights(i) * std::pow(r.nodes(i), static_cast<double>(deg));
    EXPECT_NEAR(s, 2.0 / (deg + 1.0), 1e-13);
    for (Index i = 1; i < n; ++i) EXPECT_LT(r.nodes(i - 1), r.nodes(i));
  }
}

TEST(Quadrature, LegendreValues) {
  const Vector p = legendre_values(3, 0.3);
  EXPECT_DOUBLE_EQ(p(0), 1.0);
  EXPECT_DOUBLE_EQ(p(1), 0.3);
  EXPECT_NEAR(p(2), 0.5 * (3 * 0.09 - 1), 1e-15);
  EXPECT_NEAR(p(3), 0.5 * (5 * 0.027 - 3 * 0.3), 1e-15);
}

TEST(Quadrature, SineOrthonormality) {
  const Index N = 40;
  const QuadratureRule r = gauss_legendre(4 * N + 20);
  for (Index k = 1; k <= N; ++k) {
    for (Index j = 1; j <= N; ++j) {
      double s = 0.0;
      for (Index q = 0; q < r.nodes.size(); ++q) {
        s += r.weights(q) * std::sin(k * std::numbers::pi * r.nodes(q)) * std::sin(j * std::numbers::pi * r.nodes(q));
      }
      EXPECT_NEAR(s, k == j ? 1.0 : 0.0, 1e-12) << k << "," << j;
    }
  }
}
