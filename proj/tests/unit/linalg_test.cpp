#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>

#include "oracles.hpp"
#include "smooth_sdp/linalg.hpp"
#include "smooth_sdp/random.hpp"

namespace smooth_sdp {
namespace {

TEST(PsdPseudoInverse, ThresholdIsRelativeToLargestEigenvalue) {
  RealMatrix g = RealMatrix::Zero(3, 3);
  g(0, 0) = 1.0;
  g(1, 1) = 1e-11;
  g(2, 2) = 1e-9;
  const auto p = linalg::psd_pseudo_inverse(g, 1e-10);
  EXPECT_TRUE(p.diagonal);
  EXPECT_EQ(p.rank, 2);
  EXPECT_EQ(p.pinv(1, 1), 0.0);
  EXPECT_DOUBLE_EQ(p.pinv(2, 2), 1e9);
}

TEST(PsdPseudoInverse, DiagonalAndDensePathsAgree) {
  Rng rng(3);
  RealMatrix q = RealMatrix::Zero(4, 4);
  for (Index i = 0; i < 4; ++i)
    for (Index j = 0; j < 4; ++j) q(i, j) = rng.normal();
  q = Eigen::HouseholderQR<RealMatrix>(q).householderQ();
  RealVector lam(4);
  lam << 3.0, 0.5, 0.0, 2.0;
  const RealMatrix g = q * lam.asDiagonal() * q.transpose();
  const auto p = linalg::psd_pseudo_inverse(g, 1e-10);
  EXPECT_FALSE(p.diagonal);
  EXPECT_EQ(p.rank, 3);
  RealVector inv(4);
  inv << 1.0 / 3.0, 2.0, 0.0, 0.5;
  EXPECT_LE((p.pinv - q * inv.asDiagonal() * q.transpose()).norm(), 1e-12);
}

TEST(PsdPseudoInverse, NonSquareThrows) {
  EXPECT_THROW(linalg::psd_pseudo_inverse(RealMatrix::Zero(2, 3), 1e-10), Error);
}

TEST(LambdaMin, Examples) {
  EXPECT_EQ(linalg::lambda_min(SelfAdjointMatrix::zero(3, FieldTag::kReal)), 0.0);
  Matrix s(2, 2);
  s << -1, 1, 1, -1;
  EXPECT_NEAR(linalg::lambda_min(SelfAdjointMatrix(s, FieldTag::kReal)), -2.0, 1e-14);
}

TEST(OperatorNorm, DenseAndPowerPathsAgree) {
  const Index n = linalg::kDenseNormLimit + 20;
  const auto m = testing::random_self_adjoint(n, FieldTag::kComplex, 5);
  Eigen::SelfAdjointEigenSolver<Matrix> eig(m.matrix(), Eigen::EigenvaluesOnly);
  const double exact = std::max(-eig.eigenvalues()(0), eig.eigenvalues()(n - 1));
  const double power = linalg::operator_norm(m, 11, 1e-10);
  EXPECT_LE(power, exact * (1 + 1e-12));
  EXPECT_GE(power, exact * (1 - 1e-3));
  const auto small = testing::random_self_adjoint(40, FieldTag::kReal, 6);
  Eigen::SelfAdjointEigenSolver<Matrix> e2(small.matrix(), Eigen::EigenvaluesOnly);
  EXPECT_NEAR(linalg::operator_norm(small, 0),
              std::max(-e2.eigenvalues()(0), e2.eigenvalues()(39)), 1e-12);
}

TEST(SingularValues, MatchesEigenvaluesOfGram) {
  Rng rng(2);
  for (Index cols : {3, 80}) {
    const Matrix y = rng.field_matrix(100, cols, FieldTag::kComplex);
    const RealVector s = linalg::singular_values(y);
    Eigen::SelfAdjointEigenSolver<Matrix> eig(y.adjoint() * y, Eigen::EigenvaluesOnly);
    ASSERT_EQ(s.size(), cols);
    for (Index i = 0; i < cols; ++i) {
      EXPECT_NEAR(s(i) * s(i), eig.eigenvalues()(cols - 1 - i), 1e-10 * eig.eigenvalues()(cols - 1));
    }
  }
}

TEST(Lanczos, FindsSmallestEigenvalueOfDenseMatrix) {
  const Index n = 60;
  const auto a = testing::random_self_adjoint(n, FieldTag::kReal, 8);
  Eigen::SelfAdjointEigenSolver<Matrix> eig(a.matrix(), Eigen::EigenvaluesOnly);
  linalg::MatrixOperator op = [&](const Matrix& v) -> Matrix {
    Matrix out = a.matrix() * v;
    out.imag().setZero();
    return out;
  };
  Rng rng(1);
  Matrix start = rng.field_matrix(n, 1, FieldTag::kReal);
  linalg::LanczosOptions opts;
  opts.krylov_dim = 20;
  opts.max_restarts = 50;
  const auto r = linalg::lanczos_smallest(op, start, opts);
  EXPECT_TRUE(r.converged);
  EXPECT_NEAR(r.value, eig.eigenvalues()(0), 1e-8);
  EXPECT_NEAR(std::sqrt(inner(r.vector, r.vector)), 1.0, 1e-12);
  const Matrix resid = a.matrix() * r.vector - r.value * r.vector;
  EXPECT_NEAR(std::sqrt(inner(resid, resid)), r.residual, 1e-9);
}

TEST(Lanczos, RitzValueIsAnUpperBound) {
  const Index n = 80;
  const auto a = testing::random_self_adjoint(n, FieldTag::kComplex, 9);
  Eigen::SelfAdjointEigenSolver<Matrix> eig(a.matrix(), Eigen::EigenvaluesOnly);
  linalg::MatrixOperator op = [&](const Matrix& v) -> Matrix { return a.matrix() * v; };
  Rng rng(1);
  linalg::LanczosOptions opts;
  opts.krylov_dim = 5;
  opts.max_restarts = 0;
  opts.thick_restart = 2;
  const auto r = linalg::lanczos_smallest(op, rng.field_matrix(n, 1, FieldTag::kComplex), opts);
  EXPECT_GE(r.value, eig.eigenvalues()(0) - 1e-12);
  EXPECT_EQ(r.operator_applications, 5);
}

TEST(Lanczos, InvariantSubspaceStopsEarly) {
  // The start vector lies in a two-dimensional invariant subspace.
  const Index n = 10;
  RealVector d = RealVector::LinSpaced(n, 1.0, 10.0);
  linalg::MatrixOperator op = [&](const Matrix& v) -> Matrix {
    return d.cast<Complex>().asDiagonal() * v;
  };
  Matrix start = Matrix::Zero(n, 1);
  start(2) = 1.0;
  start(5) = 1.0;
  const auto r = linalg::lanczos_smallest(op, start, {});
  EXPECT_TRUE(r.converged);
  EXPECT_NEAR(r.value, 3.0, 1e-12);
  EXPECT_LE(r.operator_applications, 3);
}

TEST(Lanczos, ZeroStartReturnsZero) {
  linalg::MatrixOperator op = [](const Matrix& v) -> Matrix { return v; };
  const auto r = linalg::lanczos_smallest(op, Matrix::Zero(4, 2), {});
  EXPECT_TRUE(r.converged);
  EXPECT_EQ(r.value, 0.0);
  EXPECT_EQ(r.operator_applications, 0);
}

}  // namespace
}  // namespace smooth_sdp
