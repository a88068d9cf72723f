#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "smooth_sdp/linalg.hpp"
#include "smooth_sdp/smoothing.hpp"

namespace smooth_sdp {
namespace {

SmoothedParams params_from(const nlohmann::json& in) {
  SmoothedParams p;
  p.trace_bound = in.at("R");
  p.projector_bound = in.at("K");
  p.cost_norm = in.at("c_norm_op");
  p.n = in.at("n");
  p.m = in.at("m");
  p.sigma_w = in.at("sigma_w");
  p.delta = in.at("delta");
  p.c0 = in.at("c0");
  return p;
}

SmoothedParams base_params() {
  SmoothedParams p;
  p.trace_bound = 100;
  p.projector_bound = 1;
  p.cost_norm = 1;
  p.n = 100;
  p.m = 100;
  p.sigma_w = 0.1;
  p.delta = 0.01;
  p.c0 = 1;
  return p;
}

void expect_rel(double got, double want, double tol) {
  EXPECT_LE(std::abs(got - want), tol * std::abs(want)) << got << " vs " << want;
}

TEST(SampleWigner, ZeroSigmaAndExactSymmetry) {
  EXPECT_EQ(sample_wigner({6, 0.0, FieldTag::kComplex, 1}).matrix().norm(), 0.0);
  const auto w = sample_wigner({6, 0.3, FieldTag::kComplex, 1});
  EXPECT_EQ(w.matrix(), w.matrix().adjoint());
  EXPECT_EQ(w.matrix().diagonal().imag().norm(), 0.0);
  const auto wr = sample_wigner({6, 0.3, FieldTag::kReal, 1});
  EXPECT_EQ(wr.matrix().imag().norm(), 0.0);
  EXPECT_EQ(sample_wigner({6, 0.3, FieldTag::kComplex, 1}).matrix(), w.matrix());
  EXPECT_NE(sample_wigner({6, 0.3, FieldTag::kComplex, 2}).matrix(), w.matrix());
}

TEST(SampleWigner, EntryMoments) {
  const double sigma = 0.7;
  const int draws = 100000;
  double sum_re = 0, sum_im = 0, sum_sq = 0, sum_re_sq = 0, diag_sum = 0, diag_sq = 0;
  for (int s = 0; s < draws; ++s) {
    const auto w = sample_wigner({2, sigma, FieldTag::kComplex, static_cast<std::uint64_t>(s)});
    const Complex z = w.matrix()(0, 1);
    sum_re += z.real();
    sum_im += z.imag();
    sum_sq += std::norm(z);
    sum_re_sq += z.real() * z.real();
    diag_sum += w.matrix()(0, 0).real();
    diag_sq += std::norm(w.matrix()(0, 0));
  }
  const double var = sigma * sigma;
  const double se = sigma / std::sqrt(static_cast<double>(draws));
  EXPECT_LE(std::abs(sum_re / draws), 5 * se);
  EXPECT_LE(std::abs(sum_im / draws), 5 * se);
  EXPECT_LE(std::abs(diag_sum / draws), 5 * se);
  EXPECT_NEAR(sum_sq / draws, var, 0.05 * var);
  EXPECT_NEAR(sum_re_sq / draws, var / 2, 0.05 * var / 2);
  EXPECT_NEAR(diag_sq / draws, var, 0.05 * var);
}

TEST(WignerNormEvent, Examples) {
  EXPECT_TRUE(wigner_norm_event(SelfAdjointMatrix::zero(5, FieldTag::kComplex), 0.2, 5));
  Matrix m = Matrix::Zero(5, 5);
  m(0, 0) = 4.0 * 0.2 * std::sqrt(5.0);
  EXPECT_FALSE(wigner_norm_event(SelfAdjointMatrix(m, FieldTag::kReal), 0.2, 5));
}

TEST(WignerNormEvent, FrequencyAtLeastTheoreticalFloor) {
  for (Index n : {20, 50}) {
    int hits = 0;
    const int draws = 1000;
    for (int s = 0; s < draws; ++s) {
      const auto w = sample_wigner({n, 0.5, FieldTag::kComplex, static_cast<std::uint64_t>(s)});
      hits += wigner_norm_event(w, 0.5, n);
    }
    const double floor = 1.0 - std::exp(-static_cast<double>(n) / 2.0) - 0.01;
    EXPECT_GE(static_cast<double>(hits) / draws, floor) << "n=" << n;
  }
}

TEST(Kappa, Examples) {
  EXPECT_DOUBLE_EQ(kappa(10, 2, 3, 50, 0.0), 60.0);
  EXPECT_DOUBLE_EQ(kappa(100, 1, 1, 100, 0.1), 400.0);
  const double base = kappa(10, 2, 3, 50, 0.1);
  EXPECT_GE(kappa(11, 2, 3, 50, 0.1), base);
  EXPECT_GE(kappa(10, 3, 3, 50, 0.1), base);
  EXPECT_GE(kappa(10, 2, 4, 50, 0.1), base);
  EXPECT_GE(kappa(10, 2, 3, 60, 0.1), base);
  EXPECT_GE(kappa(10, 2, 3, 50, 0.2), base);
}

TEST(FormulaFixtures, MatchIndependentOracle) {
  const auto fx = testing::load_formula_fixtures();
  for (const auto& c : fx.at("cases")) {
    const auto p = params_from(c.at("inputs"));
    expect_rel(kappa(p.trace_bound, p.projector_bound, p.cost_norm, p.n, p.sigma_w),
               c.at("kappa"), 1e-12);
    expect_rel(min_rank_rhs(p), c.at("min_rank_rhs"), 1e-12);
    EXPECT_EQ(min_rank(p), c.at("min_rank").get<Index>());
    expect_rel(eta(p), c.at("eta"), 1e-12);
  }
}

TEST(MinRank, DeltaOneDropsConfidenceTerm) {
  auto p = base_params();
  p.delta = 1.0;
  const double k = kappa(p.trace_bound, p.projector_bound, p.cost_norm, p.n, p.sigma_w);
  const double expected =
      3.0 * (std::log(p.n) + std::sqrt(p.m * std::log(1.0 + 6.0 * k * std::sqrt(p.c0 * p.n) / p.sigma_w)));
  expect_rel(min_rank_rhs(p), expected, 1e-14);
}

TEST(MinRank, Monotonicity) {
  auto p = base_params();
  Index previous = min_rank(p);
  for (double s : {0.2, 0.5, 1.0, 5.0}) {
    p.sigma_w = s;
    const Index k = min_rank(p);
    EXPECT_LE(k, previous);
    previous = k;
  }
  p = base_params();
  previous = min_rank(p);
  for (double m : {120.0, 200.0, 500.0}) {
    p.m = m;
    const Index k = min_rank(p);
    EXPECT_GE(k, previous);
    previous = k;
  }
}

TEST(MinRank, ZeroSigmaIsAnError) {
  auto p = base_params();
  p.sigma_w = 0.0;
  EXPECT_THROW(min_rank(p), Error);
  EXPECT_THROW(eta(p), Error);
  EXPECT_THROW(fosp_sigma_bound(1e-6, 0.0, 100, 10, 1.0), Error);
}

TEST(Eta, IncreasesWithC0AndDivergesAsSigmaVanishes) {
  auto p = base_params();
  const double base = eta(p);
  p.c0 = 2.0;
  EXPECT_GT(eta(p), base);
  p = base_params();
  double previous = eta(p);
  for (double s : {1e-2, 1e-4, 1e-8}) {
    p.sigma_w = s;
    const double e = eta(p);
    EXPECT_GT(e, previous);
    previous = e;
  }
  EXPECT_GT(previous, 1e15);
}

TEST(FospSigmaBound, Examples) {
  EXPECT_EQ(fosp_sigma_bound(0.0, 0.1, 100, 10, 1.0), 0.0);
  EXPECT_NEAR(fosp_sigma_bound(1e-6, 0.1, 100, 10, 1.0), 1e-5, 1e-20);
}

TEST(PerturbCost, Examples) {
  const auto c = testing::random_self_adjoint(12, FieldTag::kComplex, 4);
  const auto same = perturb_cost(c, {12, 0.0, FieldTag::kComplex, 1});
  EXPECT_EQ(same.cost.matrix(), c.matrix());
  EXPECT_EQ(same.wigner.matrix().norm(), 0.0);

  const auto pc = perturb_cost(c, {12, 0.3, FieldTag::kComplex, 1});
  EXPECT_EQ(pc.wigner.matrix(), sample_wigner({12, 0.3, FieldTag::kComplex, 1}).matrix());
  EXPECT_EQ(pc.cost.matrix(), c.matrix() + pc.wigner.matrix());
  // Subtraction recovers C up to one rounding per entry.
  const Matrix back = pc.cost.matrix() - pc.wigner.matrix();
  EXPECT_LE((back - c.matrix()).cwiseAbs().maxCoeff(), 1e-15 * c.matrix().cwiseAbs().maxCoeff());
  EXPECT_LE(linalg::operator_norm(pc.cost, 0),
            linalg::operator_norm(c, 0) + linalg::operator_norm(pc.wigner, 0) + 1e-12);
}

TEST(PerturbCost, DimensionOrFieldMismatchThrows) {
  const auto c = testing::random_self_adjoint(5, FieldTag::kComplex, 4);
  EXPECT_THROW(perturb_cost(c, {6, 0.1, FieldTag::kComplex, 1}), Error);
  EXPECT_THROW(perturb_cost(c, {5, 0.1, FieldTag::kReal, 1}), Error);
}

}  // namespace
}  // namespace smooth_sdp
