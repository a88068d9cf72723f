#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>

#include <numbers>

#include "oracles.hpp"
#include "smooth_sdp/certify.hpp"
#include "smooth_sdp/phasecut.hpp"
#include "smooth_sdp/random.hpp"
#include "smooth_sdp/solver.hpp"

namespace smooth_sdp::phasecut {
namespace {

TEST(MeasurementCount, RoundsUp) {
  EXPECT_EQ(measurement_count(20, 10.0), 200);
  EXPECT_EQ(measurement_count(7, 1.5), 11);
  EXPECT_EQ(measurement_count(3, 1.0), 3);
  // 10 * 1.1 is 11.000000000000002 in binary; the intended count is 11.
  EXPECT_EQ(measurement_count(10, 1.1), 11);
  EXPECT_EQ(measurement_count(10, 1.15), 12);
}

TEST(GenerateInstance, ShapeFloorAndDeterminism) {
  const auto inst = generate_instance(20, 10, 0.5, 7);
  EXPECT_EQ(inst.n, 200);
  EXPECT_EQ(inst.a.rows(), 200);
  EXPECT_EQ(inst.a.cols(), 20);
  ASSERT_TRUE(inst.z_true.has_value());
  EXPECT_EQ(inst.z_true->size(), 20);
  EXPECT_GE(inst.b.minCoeff(), kMeasurementFloor);
  const auto again = generate_instance(20, 10, 0.5, 7);
  EXPECT_EQ(inst.a, again.a);
  EXPECT_EQ(inst.b, again.b);
  EXPECT_NE(generate_instance(20, 10, 0.5, 8).b, inst.b);
}

TEST(GenerateInstance, NoiselessMeasurementsAreFlooredMagnitudes) {
  const auto inst = generate_instance(6, 4, 0.0, 3);
  const RealVector mag = (inst.a * *inst.z_true).cwiseAbs();
  for (Index i = 0; i < inst.n; ++i) {
    EXPECT_EQ(inst.b(i), std::max(mag(i), kMeasurementFloor));
  }
}

TEST(GenerateInstance, DrawOrderIsSignalThenSensingThenNoise) {
  const auto inst = generate_instance(2, 2, 1.0, 11);
  Rng rng(11);
  CVector z(2);
  for (Index i = 0; i < 2; ++i) z(i) = rng.complex_normal();
  Matrix a(4, 2);
  for (Index i = 0; i < 4; ++i)
    for (Index j = 0; j < 2; ++j) a(i, j) = rng.complex_normal();
  EXPECT_EQ(z, *inst.z_true);
  EXPECT_EQ(a, inst.a);
  const RealVector mag = (a * z).cwiseAbs();
  for (Index i = 0; i < 4; ++i) {
    EXPECT_EQ(inst.b(i), std::max(mag(i) + rng.normal(), kMeasurementFloor));
  }
}

TEST(GenerateInstance, RejectsBadArguments) {
  EXPECT_THROW(generate_instance(0, 10, 0, 1), Error);
  EXPECT_THROW(generate_instance(5, 0.5, 0, 1), Error);
  EXPECT_THROW(generate_instance(5, 2, -1, 1), Error);
}

TEST(FloorInactiveInstance, FloorNeverBinds) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto inst = generate_floor_inactive_instance(5, 10, seed);
    EXPECT_GT((inst.a * *inst.z_true).cwiseAbs().minCoeff(), kMeasurementFloor);
    EXPECT_EQ(inst.noise_sigma, 0.0);
  }
}

TEST(BuildCost, PsdAndNoiselessIdentity) {
  const auto inst = generate_floor_inactive_instance(5, 10, 2);
  const auto c = build_cost(inst);
  Eigen::SelfAdjointEigenSolver<Matrix> eig(c.matrix(), Eigen::EigenvaluesOnly);
  const double norm = eig.eigenvalues().cwiseAbs().maxCoeff();
  EXPECT_GE(eig.eigenvalues()(0), -1e-10 * norm);
  CVector u = inst.a * *inst.z_true;
  for (Index i = 0; i < u.size(); ++i) u(i) /= std::abs(u(i));
  EXPECT_LE(std::abs((u.adjoint() * c.matrix() * u)(0).real()), 1e-10 * norm * inst.n);
}

TEST(BuildCost, SquareInvertibleSensingGivesZero) {
  const auto inst = generate_instance(6, 1.0, 0.3, 4);
  EXPECT_LE(build_cost(inst).matrix().norm(), 1e-12 * inst.b.squaredNorm());
}

TEST(BuildCost, RankDeficientSensingThrows) {
  auto inst = generate_instance(4, 3, 0.0, 4);
  inst.a.col(3) = inst.a.col(0);
  try {
    build_cost(inst);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kRankDeficient);
  }
}

TEST(BuildSdp, StructureAndConstants) {
  const auto inst = generate_instance(4, 5, 0.1, 1);
  const auto p = build_sdp(inst);
  EXPECT_EQ(p.m(), p.n());
  EXPECT_EQ(p.field(), FieldTag::kComplex);
  EXPECT_EQ(p.trace_bound(), static_cast<double>(p.n()));
  EXPECT_EQ(p.projector_bound(), 1.0);
  EXPECT_EQ(p.b(), RealVector::Ones(p.n()));
  for (Index i = 0; i < p.m(); ++i) {
    const Matrix a = p.constraints().matrix(i).matrix();
    EXPECT_EQ((a.array() != Complex(0.0)).count(), 1);
    EXPECT_EQ(a(i, i), Complex(1.0));
  }
  const Matrix y = random_feasible_point(p, 3, 5);
  EXPECT_LE((gram_matrix(p, y) - RealMatrix::Identity(p.n(), p.n())).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_NEAR((y * y.adjoint()).trace().real(), static_cast<double>(p.n()), 1e-12);
}

TEST(DefaultRank, Examples) {
  EXPECT_EQ(default_rank(100), 10);
  EXPECT_EQ(default_rank(3000), 55);
  EXPECT_EQ(default_rank(1), 1);
  EXPECT_EQ(default_rank(101), 11);
  EXPECT_EQ(default_rank(400), 20);
  EXPECT_EQ(default_rank(900), 30);
}

TEST(RoundSolution, RankOneFactorIsRecoveredUpToGlobalPhase) {
  const auto inst = generate_instance(4, 6, 0.2, 3);
  Rng rng(1);
  Matrix y(inst.n, 1);
  for (Index i = 0; i < inst.n; ++i) y(i, 0) = std::polar(1.0, 2 * std::numbers::pi * rng.uniform());
  const auto sol = round_solution(inst, y);
  const Complex phase = sol.u(0) / y(0, 0);
  EXPECT_NEAR(std::abs(phase), 1.0, 1e-12);
  EXPECT_LE((sol.u - phase * y.col(0)).norm(), 1e-12 * std::sqrt(inst.n));
  for (Index i = 0; i < inst.n; ++i) EXPECT_NEAR(std::abs(sol.u(i)), 1.0, 1e-12);
  const CVector bu = inst.b.cast<Complex>().cwiseProduct(sol.u);
  const CVector ls = inst.a.completeOrthogonalDecomposition().solve(bu);
  EXPECT_LE((sol.z_hat - ls).norm(), 1e-10 * ls.norm());
  const auto c = build_cost(inst);
  EXPECT_NEAR(sol.objective, (sol.u.adjoint() * c.matrix() * sol.u)(0).real(), 1e-10);
  EXPECT_TRUE(sol.relative_error.has_value());
}

TEST(RoundSolution, ZeroProjectionFallsBackToOne) {
  const auto inst = generate_instance(2, 2, 0.0, 3);
  Matrix y = Matrix::Zero(inst.n, 2);
  y(0, 0) = 1.0;
  y(1, 0) = 1.0;
  y(2, 1) = 1.0;
  y(3, 0) = Complex(0.0, 1.0);
  // The leading right singular vector is e_1, so row 2 projects to zero.
  const auto sol = round_solution(inst, y);
  EXPECT_EQ(sol.u(2), Complex(1.0));
}

TEST(RoundSolution, NoiselessPipelineRecoversSignal) {
  const auto inst = generate_floor_inactive_instance(5, 10, 12);
  const auto p = build_sdp(inst);
  SolverOptions opts;
  opts.eps_g = 1e-8;
  opts.seed = 12;
  const auto r = solve(p, p.cost(), default_rank(inst.n), std::nullopt, opts);
  ASSERT_TRUE(r.converged);
  const auto sol = round_solution(inst, p.cost(), r.y);
  ASSERT_TRUE(sol.relative_error.has_value());
  EXPECT_LE(*sol.relative_error, 1e-3);
  const auto pt = build_factor_point(p, p.cost(), r.y);
  EXPECT_GE(sol.objective, dual_lower_bound(pt, p.trace_bound()));
}

TEST(RecoveryError, Examples) {
  Rng rng(5);
  CVector z(6);
  for (Index i = 0; i < 6; ++i) z(i) = rng.complex_normal();
  EXPECT_EQ(recovery_error(z, z), 0.0);
  EXPECT_NEAR(recovery_error(Complex(0, 1) * z, z), 0.0, 1e-15);
  EXPECT_DOUBLE_EQ(recovery_error(CVector::Zero(6), z), 1.0);
  for (int t = 0; t < 100; ++t) {
    const Complex theta = std::polar(1.0, 2 * std::numbers::pi * rng.uniform());
    EXPECT_NEAR(recovery_error(theta * z, z), 0.0, 1e-14);
  }
  EXPECT_THROW(recovery_error(z, CVector::Zero(6)), Error);
  EXPECT_THROW(recovery_error(z, CVector::Ones(5)), Error);
}

}  // namespace
}  // namespace smooth_sdp::phasecut
