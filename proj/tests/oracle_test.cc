#include "invopt/oracle.h"

#include <gtest/gtest.h>

#include "invopt/error.h"
#include "test_util.h"

namespace invopt {
namespace {

using testing::Ex1;
using testing::Ex1Raw;
using testing::Vec;

TEST(EnumerateIntegerPoints, Ex1HasEightPoints) {
  const auto points = EnumerateIntegerPoints(Ex1());
  ASSERT_EQ(points.size(), 8u);
  for (size_t k = 0; k < 8; ++k) {
    EXPECT_EQ(points[k].head(2), Eigen::VectorXd(testing::Ex1IntegerPoints()[k]));
  }
}

TEST(EnumerateIntegerPoints, WithCut) {
  RawProblem raw = Ex1Raw();
  raw.constraints.push_back({{1, 1}, Relation::kLessEqual, 6});
  const auto points = EnumerateIntegerPoints(Standardize(raw));
  ASSERT_EQ(points.size(), 3u);
  EXPECT_EQ(points[0].head(2), Vec({2, 4}));
  EXPECT_EQ(points[1].head(2), Vec({3, 3}));
  EXPECT_EQ(points[2].head(2), Vec({4, 2}));
}

TEST(EnumerateIntegerPoints, EmptyAndUnbounded) {
  RawProblem raw = Ex1Raw();
  raw.constraints.push_back({{1, 1}, Relation::kLessEqual, 5});
  EXPECT_TRUE(EnumerateIntegerPoints(Standardize(raw)).empty());

  RawProblem open;
  open.num_vars = 2;
  open.constraints = {{{1, -1}, Relation::kLessEqual, 0}};
  open.integer = {true, true};
  EXPECT_THROW(EnumerateIntegerPoints(Standardize(open)), Error);
}

TEST(EnumerateIntegerPoints, MixedProfilesContinuous) {
  RawProblem raw = Ex1Raw();
  raw.integer = {true, false};
  // For each x1 in 2..4, x2 ranges over an interval.
  const ForwardOracleResult r = BruteForceForward(Standardize(raw), Vec({0, 1}));
  // min x2 at x1 = 4: rows give x2 >= max(1, 4/3, -) -> 4/3 from row 2
  // (-x1 - 3 x2 <= -8 -> x2 >= 4/3) and row 1 (x2 >= 1).
  EXPECT_NEAR(r.value, 4.0 / 3, 1e-9);
}

TEST(BruteForceForward, Ex1Values) {
  const ForwardProblem p = Ex1();
  const ForwardOracleResult a = BruteForceForward(p, Vec({4.0 / 3, 1}));
  EXPECT_NEAR(a.value, 20.0 / 3, 1e-12);
  ASSERT_EQ(a.argmin.size(), 1u);
  EXPECT_EQ(a.argmin[0].head(2), Vec({2, 4}));

  EXPECT_EQ(BruteForceForward(p, Vec({0, 0})).argmin.size(), 8u);

  const ForwardOracleResult c = BruteForceForward(p, Vec({1, 1}));
  EXPECT_NEAR(c.value, 6, 1e-12);
  EXPECT_EQ(c.argmin.size(), 3u);
}

TEST(CertifyInverse, Ex1) {
  const ForwardProblem p = Ex1();
  const Observation obs = AttachObservation(p, Vec({4, 2}));
  EXPECT_TRUE(CertifyInverse(p, obs, Vec({1, 1})).optimal);
  const InverseCertificate c = CertifyInverse(p, obs, Vec({4.0 / 3, 1}));
  EXPECT_FALSE(c.optimal);
  EXPECT_NEAR(c.gap, 2.0 / 3, 1e-12);
  for (const auto& x : testing::Ex1IntegerPoints()) {
    EXPECT_TRUE(CertifyInverse(p, AttachObservation(p, x), Vec({0, 0})).optimal);
  }
}

TEST(EnumerateVertices2d, Ex1Vertices) {
  const auto vertices = EnumerateVertices2d(Ex1());
  ASSERT_EQ(vertices.size(), 4u);
  for (const auto& expected : testing::Ex1Vertices()) {
    bool found = false;
    for (const auto& v : vertices) found = found || (v - expected).norm() < 1e-9;
    EXPECT_TRUE(found) << expected.transpose();
  }
}

}  // namespace
}  // namespace invopt
