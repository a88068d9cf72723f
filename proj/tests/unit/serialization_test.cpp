#include <gtest/gtest.h>

#include "oracles.hpp"
#include "smooth_sdp/serialization.hpp"

namespace smooth_sdp::io {
namespace {

TEST(MatrixJson, RoundTripBothFields) {
  const auto c = testing::random_self_adjoint(3, FieldTag::kComplex, 1).matrix();
  EXPECT_EQ(matrix_from_json(matrix_to_json(c, FieldTag::kComplex), 3, 3, FieldTag::kComplex), c);
  const auto r = testing::random_self_adjoint(3, FieldTag::kReal, 1).matrix();
  const Json jr = matrix_to_json(r, FieldTag::kReal);
  EXPECT_TRUE(jr[0].is_number());
  EXPECT_EQ(matrix_from_json(jr, 3, 3, FieldTag::kReal), r);
}

TEST(MatrixJson, RowMajorLayout) {
  Matrix m(2, 2);
  m << 1, 2, 3, 4;
  EXPECT_EQ(matrix_to_json(m, FieldTag::kReal), Json::parse("[1.0, 2.0, 3.0, 4.0]"));
}

TEST(MatrixJson, RejectsMalformedInput) {
  auto expect_parse = [](const Json& j, Index r, Index c, FieldTag f) {
    try {
      matrix_from_json(j, r, c, f);
      FAIL() << j.dump();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kParse);
    }
  };
  expect_parse(Json::parse("[1, 2, 3]"), 2, 2, FieldTag::kReal);
  expect_parse(Json::parse("[[1, 2], 0, 0, 0]"), 2, 2, FieldTag::kReal);
  expect_parse(Json::parse("[\"x\", 0, 0, 0]"), 2, 2, FieldTag::kReal);
  expect_parse(Json::parse("{}"), 1, 1, FieldTag::kReal);
}

TEST(ProblemJson, RoundTripDetectsRowNorm) {
  const auto pp = testing::random_phasecut_point(2, 12, 2);
  const Json j = problem_to_json(pp.problem);
  EXPECT_EQ(j.at("field"), "complex");
  EXPECT_EQ(j.at("A").size(), static_cast<std::size_t>(pp.problem.m()));
  const auto back = problem_from_json(j);
  EXPECT_EQ(back.constraints().kind(), ConstraintKind::kRowNorm);
  EXPECT_EQ(back.cost().matrix(), pp.problem.cost().matrix());
  EXPECT_EQ(back.b(), pp.problem.b());
  EXPECT_EQ(back.trace_bound(), pp.problem.trace_bound());
  EXPECT_EQ(dump(problem_to_json(back)), dump(j));
}

TEST(ProblemJson, DenseConstraintsRoundTrip) {
  const auto dp = testing::random_dense_point(3, 4, 3, 2, FieldTag::kReal);
  const auto back = problem_from_json(problem_to_json(dp.problem));
  EXPECT_EQ(back.constraints().kind(), ConstraintKind::kDense);
  for (Index i = 0; i < 3; ++i) {
    EXPECT_EQ(back.constraints().matrix(i).matrix(), dp.problem.constraints().matrix(i).matrix());
  }
}

TEST(ProblemJson, InvalidProblemIsParseError) {
  const auto pp = testing::random_phasecut_point(2, 12, 2);
  Json j = problem_to_json(pp.problem);
  j["R"] = -1.0;
  try {
    problem_from_json(j);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kParse);
  }
  j = problem_to_json(pp.problem);
  j.erase("b");
  EXPECT_THROW(problem_from_json(j), Error);
}

TEST(InstanceJson, RoundTrip) {
  const auto inst = phasecut::generate_instance(3, 4, 0.5, 9);
  const Json j = instance_to_json(inst);
  const auto back = instance_from_json(j);
  EXPECT_EQ(back.a, inst.a);
  EXPECT_EQ(back.b, inst.b);
  EXPECT_EQ(*back.z_true, *inst.z_true);
  EXPECT_EQ(back.seed, inst.seed);
  EXPECT_EQ(back.noise_sigma, inst.noise_sigma);
  EXPECT_EQ(dump(instance_to_json(back)), dump(j));
  Json no_truth = j;
  no_truth.erase("z_true");
  EXPECT_FALSE(instance_from_json(no_truth).z_true.has_value());
}

TEST(FactorJson, RoundTrip) {
  const auto pp = testing::random_phasecut_point(4, 12, 3);
  const Matrix back = factor_from_json(factor_to_json(pp.y));
  EXPECT_EQ(back, pp.y);
}

TEST(Dump, SortedKeysAndTrailingNewline) {
  Json j;
  j["zeta"] = 1;
  j["alpha"] = 2;
  const std::string s = dump(j);
  EXPECT_LT(s.find("alpha"), s.find("zeta"));
  EXPECT_EQ(s.back(), '\n');
}

TEST(Files, ReadAndWriteErrors) {
  testing::TempDir dir;
  write_text_file(dir.file("a.json"), "{\"x\": 1}\n");
  EXPECT_EQ(read_json_file(dir.file("a.json")).at("x"), 1);
  write_text_file(dir.file("bad.json"), "{not json");
  try {
    read_json_file(dir.file("bad.json"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kParse);
  }
  try {
    read_json_file(dir.file("missing.json"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kIo);
  }
  try {
    write_text_file(dir.file("no/such/dir/x.json"), "{}");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kIo);
  }
}

}  // namespace
}  // namespace smooth_sdp::io
