#include "invopt/inverse_mio.h"

#include <gtest/gtest.h>

#include <random>

#include "invopt/error.h"
#include "invopt/inverse_lp.h"
#include "invopt/oracle.h"
#include "test_util.h"

namespace invopt {
namespace {

using testing::Ex1;
using testing::Vec;

class Ex1Fixture : public ::testing::Test {
 protected:
  ForwardProblem p = Ex1();
  Observation obs = AttachObservation(p, Vec({4, 2}));
  SupportSets supports = PartitionSupport(obs, p);
  Eigen::VectorXd c_ring = ReferenceCost(p, Vec({3, 1}));
};

TEST_F(Ex1Fixture, ConciseLpShape) {
  const ConciseLp lp = BuildConciseLp(p, obs, supports, c_ring);
  EXPECT_EQ(lp.model.num_rows(), 7);  // six support rows and the gap row
  EXPECT_EQ(lp.layout.eps[2], 4 + 2);
  EXPECT_DOUBLE_EQ(lp.model.rows[2].coeffs(lp.layout.eps[2]), 1.0 / 3);
  for (int i = 0; i < 6; ++i) EXPECT_EQ(lp.layout.s[i], -1);
  EXPECT_EQ(lp.layout.f[2], -1);
}

TEST_F(Ex1Fixture, ConciseLpZeroEntryMovesToC12) {
  RawProblem raw;
  raw.num_vars = 2;
  raw.constraints = {{{1, 1}, Relation::kLessEqual, 5}};
  const ForwardProblem q = Standardize(raw);
  const Observation o = AttachObservation(q, Vec({0, 3}));
  const ConciseLp lp = BuildConciseLp(q, o, PartitionSupport(o, q), Vec({1, 1, 0}));
  EXPECT_GE(lp.layout.s[0], 0);
  EXPECT_EQ(lp.layout.eps[0], -1);
}

TEST_F(Ex1Fixture, KnownBiobjectiveSolutionReplays) {
  // Known rounded solution: g = (1.67, 0, ...), eps_3 = 1, y_1 = -1/3.
  const ConciseLp lp = BuildConciseLp(p, obs, supports, c_ring);
  Eigen::VectorXd x = Eigen::VectorXd::Zero(lp.model.num_vars());
  x(0) = -1.0 / 3;
  x(lp.layout.eps[2]) = 1.0;
  x(lp.layout.g[0]) = 1.67;
  // Rounding 5/3 to 1.67 moves the gap row by 4 * 1/300, so that row gets the
  // rounding bound instead of the flat 1e-2.
  for (int r = 0; r < 6; ++r) {
    const LinearRow& row = lp.model.rows[r];
    EXPECT_LE(std::abs(row.coeffs.dot(x) - row.rhs), 1e-2);
  }
  const LinearRow& gap_row = lp.model.rows[6];
  EXPECT_LE(std::abs(gap_row.coeffs.dot(x) - gap_row.rhs), 0.005 * obs.x_hat(0));
}

TEST_F(Ex1Fixture, BiobjectiveGolden) {
  const InverseSolution sol =
      SolveBiobjectiveModel(p, obs, c_ring, Eigen::VectorXd::Ones(6));
  EXPECT_NEAR(sol.master_objective, 8.0 / 3, 1e-8);
  EXPECT_NEAR(sol.l1_deviation(), 5.0 / 3, 1e-8);
  EXPECT_NEAR(sol.eps_total(), 1.0, 1e-8);
  EXPECT_NEAR(sol.c_hat(0), 4.0 / 3, 1e-8);
  EXPECT_NEAR(sol.c_hat(1), 1.0, 1e-8);
  ASSERT_TRUE(sol.lp_certificate.has_value());
  EXPECT_NEAR(sol.lp_certificate->objective, 19.0 / 3, 1e-8);
  const ForwardOracleResult fwd = BruteForceForward(p, sol.c_hat);
  EXPECT_NEAR(fwd.value, 20.0 / 3, 1e-9);
  EXPECT_EQ(fwd.argmin[0].head(2), Vec({2, 4}));
}

TEST_F(Ex1Fixture, ShiftEpsilonGolden) {
  const InverseSolution base =
      SolveBiobjectiveModel(p, obs, c_ring, Eigen::VectorXd::Ones(6));
  const InverseSolution shifted = ShiftEpsilon(p, obs, base, 2, 2.0 / 3);
  EXPECT_NEAR(shifted.c_hat(0), 4.0 / 9, 1e-8);
  EXPECT_NEAR(shifted.c_hat(1), 1.0 / 3, 1e-8);
  EXPECT_EQ(shifted.c_hat.tail(4), Eigen::VectorXd::Zero(4));
  EXPECT_NEAR(shifted.c_hat.dot(obs.x_hat), 22.0 / 9, 1e-8);
  EXPECT_NEAR(shifted.l1_deviation(), 29.0 / 9, 1e-8);
  EXPECT_NEAR(shifted.eps(2), 1.0 / 3, 1e-8);
  EXPECT_NEAR(BruteForceForward(p, shifted.c_hat).value, 20.0 / 9, 1e-9);
  EXPECT_FALSE(shifted.lp_certificate.has_value());
  // The support rows still hold with the folded dual.
  for (int i = 0; i < 6; ++i) {
    const double lhs = p.A.col(i).dot(shifted.y) + shifted.eps(i) / obs.x_hat(i);
    EXPECT_NEAR(lhs, shifted.c_hat(i), 1e-9);
  }

  const InverseSolution same = ShiftEpsilon(p, obs, base, 2, 0.0);
  EXPECT_TRUE(same.c_hat.isApprox(base.c_hat, 1e-12));
  EXPECT_THROW(ShiftEpsilon(p, obs, base, 0, 0.5), Error);
  EXPECT_THROW(ShiftEpsilon(p, obs, base, 3, 0.5), Error);
}

TEST_F(Ex1Fixture, ShiftAllMatchesEnumeration) {
  const InverseSolution base =
      SolveBiobjectiveModel(p, obs, c_ring, Eigen::VectorXd::Ones(6));
  const InverseSolution shifted = ShiftEpsilon(p, obs, base, 2, 1.0);
  EXPECT_NEAR(shifted.eps(2), 0, 1e-12);
  Eigen::VectorXd with_slack = base.c_hat;
  with_slack(2) = -base.eps(2) / obs.x_hat(2);
  const FoldedCost folded = FoldSlackCosts(p, with_slack);
  for (const auto& x : EnumerateIntegerPoints(p)) {
    EXPECT_NEAR(with_slack.dot(x), shifted.c_hat.dot(x) + folded.offset, 1e-9);
  }
}

TEST_F(Ex1Fixture, FoldSlackCosts) {
  const FoldedCost id = FoldSlackCosts(p, Vec({4.0 / 3, 1, 0, 0, 0, 0}));
  EXPECT_TRUE(id.cost.isApprox(Vec({4.0 / 3, 1, 0, 0, 0, 0})));
  EXPECT_EQ(id.offset, 0);
  const FoldedCost f = FoldSlackCosts(p, Vec({4.0 / 3, 1, -2.0 / 9, 0, 0, 0}));
  EXPECT_NEAR(f.cost(0), 4.0 / 9, 1e-12);
  EXPECT_NEAR(f.cost(1), 1.0 / 3, 1e-12);
  EXPECT_NEAR(f.offset, 38.0 / 9, 1e-12);

  std::mt19937_64 rng(43);
  std::uniform_real_distribution<double> u(-2, 2);
  const auto points = EnumerateIntegerPoints(p);
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::VectorXd c = Vec({u(rng), u(rng), u(rng), u(rng), u(rng), u(rng)});
    const FoldedCost folded = FoldSlackCosts(p, c);
    for (const auto& x : points) {
      EXPECT_NEAR(c.dot(x), folded.cost.dot(x) + folded.offset, 1e-9);
    }
  }
}

TEST_F(Ex1Fixture, FoldHandlesGreaterEqualRows) {
  RawProblem raw;
  raw.num_vars = 2;
  raw.constraints = {{{1, 1}, Relation::kGreaterEqual, 2},
                     {{1, -1}, Relation::kLessEqual, 1}};
  raw.upper_bounds = {3.0, 3.0};
  raw.integer = {true, true};
  const ForwardProblem q = Standardize(raw);
  const Eigen::VectorXd c = Vec({1, 2, 0.5, -0.25, 0.75, 1.5});
  const FoldedCost folded = FoldSlackCosts(q, c);
  for (const auto& x : EnumerateIntegerPoints(q)) {
    EXPECT_NEAR(c.dot(x), folded.cost.dot(x) + folded.offset, 1e-9);
  }
}

TEST_F(Ex1Fixture, ToleranceGolden) {
  const InverseSolution sol = SolveToleranceModel(p, obs, c_ring, 1e-3);
  EXPECT_NEAR(sol.l1_deviation(), 3.99, 0.05);
  EXPECT_LE(sol.eps_total(), 1e-3 * sol.l1_deviation() + 1e-9);
  EXPECT_NEAR(sol.c_hat(0), 0.005, 1e-3);
  EXPECT_NEAR(sol.c_hat(1), 0.004, 1e-3);
  EXPECT_LE(sol.lp_certificate->identity_residual, 1e-9);
}

TEST_F(Ex1Fixture, ToleranceWithCutGivesNormTwo) {
  const Eigen::VectorXd x_ip = CompletePoint(p, Vec({2, 4}));
  const InverseSolution sol = SolveToleranceModel(p, obs, c_ring, 1.0, {x_ip});
  EXPECT_NEAR(sol.l1_deviation(), 2.0, 1e-8);
  EXPECT_LE(sol.c_hat(0), sol.c_hat(1) + 1e-9);
  EXPECT_TRUE(CertifyInverse(p, obs, sol.c_hat).optimal);

  // The known optimum c = (1, 1) sits in the optimal face and its gap is
  // eps_3 = 2/3, eps_4 = 2/9.
  InverseSolution known = sol;
  known.c_hat = Vec({1, 1, 0, 0, 0, 0});
  const MinGapResult gap = MinGapLp(p, obs, known.c_hat);
  EXPECT_NEAR(gap.gap, 8.0 / 9, 1e-9);
  EXPECT_NEAR(gap.eps(2), 2.0 / 3, 1e-9);
  EXPECT_NEAR(gap.eps(3), 2.0 / 9, 1e-9);
}

TEST_F(Ex1Fixture, LargeTauGivesReference) {
  const InverseSolution sol = SolveToleranceModel(p, obs, c_ring, 1e6);
  // At finite tau the cheapest move buys deviation gap(c_ring) / tau, with
  // gap(c_ring) = 14 - 257/29 (vertex K), so the deviation vanishes as tau
  // grows.
  EXPECT_LE(sol.l1_deviation(), (14 - 257.0 / 29) / 1e6 + 1e-9);
  const InverseSolution concise = SolveConciseModel(p, obs, c_ring);
  EXPECT_NEAR(concise.l1_deviation(), 0, 1e-9);
  EXPECT_NEAR(concise.eps_total(),
              c_ring.dot(obs.x_hat) - concise.lp_certificate->objective, 1e-9);
}

TEST_F(Ex1Fixture, HugeWeightsDriveGapToZero) {
  const InverseSolution sol =
      SolveBiobjectiveModel(p, obs, c_ring, Eigen::VectorXd::Constant(6, 1e9));
  EXPECT_LE(sol.eps_total(), 1e-6);
  // x_hat is interior, so only c = 0 makes it LP-optimal.
  EXPECT_NEAR(sol.l1_deviation(), 4, 1e-6);
}

TEST_F(Ex1Fixture, HugeWeightsOnBoundaryMatchComplementarity) {
  RawProblem raw;
  raw.num_vars = 2;
  raw.constraints = {{{1, 1}, Relation::kLessEqual, 4},
                     {{1, -1}, Relation::kLessEqual, 2}};
  raw.integer = {true, true};
  const ForwardProblem q = Standardize(raw);
  const Observation o = AttachObservation(q, Vec({3, 1}));  // both rows tight
  const Eigen::VectorXd cr = ReferenceCost(q, Vec({1, 2}));
  const SupportSets s = PartitionSupport(o, q);
  const InverseSolution sol = SolveBiobjectiveModel(
      q, o, cr, Eigen::VectorXd::Constant(static_cast<int>(s.in.size()), 1e9));
  EXPECT_NEAR(sol.l1_deviation(),
              InverseLpComplementarity(q, o, cr).l1_deviation, 1e-6);
}

TEST_F(Ex1Fixture, BigMAtLeastConcise) {
  const InverseSolution concise = SolveConciseModel(p, obs, c_ring);
  const InverseSolution bigm = SolveBigMModel(p, obs, c_ring);
  EXPECT_GE(bigm.master_objective, concise.master_objective - 1e-9);
  const Eigen::VectorXd x_lp = obs.x_hat - bigm.delta;
  EXPECT_LE((p.A * x_lp - p.b).cwiseAbs().maxCoeff(), 1e-7);
  EXPECT_GE(x_lp.minCoeff(), -1e-7);
  // Complementarity with the certificate dual slacks s = eps / x_hat.
  double comp = 0;
  for (int i = 0; i < 6; ++i) comp += x_lp(i) * bigm.eps(i) / obs.x_hat(i);
  EXPECT_NEAR(comp, 0, 1e-7);

  ModelOptions options;
  options.kind = ModelKind::kBigM;
  options.tau = 1e-3;
  const InverseSolution tight = SolveInverse(p, obs, c_ring, options);
  const InverseSolution lp_tol = SolveToleranceModel(p, obs, c_ring, 1e-3);
  EXPECT_GE(tight.master_objective, lp_tol.master_objective - 1e-7);
  EXPECT_LE(tight.eps_total(), 1e-3 * tight.l1_deviation() + 1e-7);
}

TEST_F(Ex1Fixture, BigMRetriesWhenCapBinds) {
  // M = 0.01 binds immediately; the retry ladder must lift it.
  const InverseSolution sol = SolveBigMModel(p, obs, c_ring, 0.01);
  EXPECT_GT(sol.big_m, 0.01);
}

TEST(DefaultTau, Ladder) {
  EXPECT_EQ(DefaultTau(500), 1e-3);
  EXPECT_EQ(DefaultTau(999.999), 1e-3);
  EXPECT_EQ(DefaultTau(1e3), 1e-4);
  EXPECT_EQ(DefaultTau(1e4), 1e-5);
  EXPECT_EQ(DefaultTau(5e4), 1e-5);
  EXPECT_EQ(DefaultTau(1e5), 1e-6);
  EXPECT_EQ(DefaultTau(1e7), 1e-6);
  EXPECT_EQ(DefaultTau(-1e6), 1e-3);
}

TEST(DefaultWeights, Clamp) {
  const ForwardProblem p = Ex1();
  const Observation obs = AttachObservation(p, Vec({4, 2}));
  EXPECT_EQ(DefaultWeights(obs, PartitionSupport(obs, p)), Vec({4, 2, 3, 2, 4, 19}));
  Observation half;
  half.x_hat = Vec({0.5, 19});
  SupportSets s;
  s.in = {0, 1};
  EXPECT_EQ(DefaultWeights(half, s), Vec({2, 19}));
  EXPECT_EQ(DefaultWeights(half, SupportSets{}).size(), 0);
}

TEST(ScaleCost, Breakpoints) {
  const ForwardProblem p = Ex1();
  const ScaledCost a = ScaleCost(p, Vec({0.005, 0.004, 0, 0, 0, 0}), Vec({3, 1}));
  EXPECT_NEAR(a.lambda, 600, 1e-9);
  EXPECT_NEAR(a.cost(0), 3, 1e-12);
  EXPECT_NEAR(a.cost(1), 2.4, 1e-12);
  EXPECT_NEAR(a.l1_deviation, 1.4, 1e-12);

  const ScaledCost same = ScaleCost(p, Vec({3, 1}), Vec({3, 1}));
  EXPECT_EQ(same.lambda, 1);
  const ScaledCost half = ScaleCost(p, Vec({6, 2}), Vec({3, 1}));
  EXPECT_NEAR(half.lambda, 0.5, 1e-15);
  EXPECT_NEAR(half.l1_deviation, 0, 1e-15);
  // Exact direction of the face K-M: (3, 2.25) at norm 1.25.
  const ScaledCost face = ScaleCost(p, Vec({4, 3}), Vec({3, 1}));
  EXPECT_NEAR(face.l1_deviation, 1.25, 1e-12);
  EXPECT_NEAR(face.cost(1), 2.25, 1e-12);
  EXPECT_THROW(ScaleCost(p, Vec({0, 0}), Vec({3, 1})), Error);
}

TEST(ScaleCost, KeepsForwardArgmin) {
  const ForwardProblem p = Ex1();
  std::mt19937_64 rng(47);
  std::uniform_real_distribution<double> u(0.01, 3);
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::VectorXd c = Vec({u(rng), u(rng)});
    const ScaledCost scaled = ScaleCost(p, ExpandCost(p, c), Vec({3, 1}));
    const auto a = BruteForceForward(p, c).argmin;
    const auto b = BruteForceForward(p, scaled.cost).argmin;
    ASSERT_EQ(a.size(), b.size());
    for (size_t k = 0; k < a.size(); ++k) EXPECT_EQ(a[k], b[k]);
  }
}

TEST(Metrics, Arithmetic) {
  const ForwardProblem p = Ex1();
  const Observation obs = AttachObservation(p, Vec({4, 2}));
  const Metrics zero = ComputeMetrics(Vec({1, 1, 0, 0, 0, 0}), Vec({3, 1, 0, 0, 0, 0}),
                                      obs, 0, 6, 6);
  EXPECT_EQ(zero.rgap, 0);
  EXPECT_TRUE(zero.optimal_at_e2 && zero.optimal_at_e5);
  EXPECT_NEAR(zero.rnorm_norm_of_diff, 0.5, 1e-15);
  EXPECT_NEAR(zero.rnorm_diff_of_norms, -0.5, 1e-15);

  const Metrics m = ComputeMetrics(Vec({4.0 / 3, 1, 0, 0, 0, 0}),
                                   Vec({3, 1, 0, 0, 0, 0}), obs, 1, 20.0 / 3, 20.0 / 3);
  EXPECT_NEAR(m.rgap, 1.0 / 11, 1e-12);
  EXPECT_FALSE(m.optimal_at_e2);

  const double air = RelativeGap(25886.08, 25885.88);
  EXPECT_NEAR(air, 0.2 / 25886.08, 1e-12);
  EXPECT_LT(air, 1e-5);
  EXPECT_GT(air, 7.7e-6);
  EXPECT_LT(air, 7.8e-6);
}

TEST(EvaluateSolution, FillsForwardBounds) {
  const ForwardProblem p = Ex1();
  const Observation obs = AttachObservation(p, Vec({4, 2}));
  InverseSolution sol = SolveBiobjectiveModel(p, obs, ReferenceCost(p, Vec({3, 1})),
                                              Eigen::VectorXd::Ones(6));
  EvaluateSolution(p, obs, Vec({3, 1}), sol);
  EXPECT_NEAR(sol.metrics.forward_lower_bound, 20.0 / 3, 1e-9);
  EXPECT_NEAR(sol.metrics.rgap, 1.0 / 11, 1e-9);
  EXPECT_NEAR(sol.metrics.l1_deviation, sol.l1_deviation(), 1e-9);
}

// Existence and the gap identity across random problems and every model.
TEST(InverseProperties, FeasibleAndIdentityHolds) {
  std::mt19937_64 rng(53);
  std::uniform_int_distribution<int> cost(-5, 5);
  int checked = 0;
  for (int trial = 0; trial < 40; ++trial) {
    const auto inst = testing::RandomIntegerProblem(rng, 3, 3);
    const ForwardProblem p = Standardize(inst.raw);
    const auto points = EnumerateIntegerPoints(p);
    if (points.empty()) continue;
    const Observation obs =
        AttachObservation(p, points[rng() % points.size()].head(3));
    const Eigen::VectorXd c_ring =
        Vec({double(cost(rng)), double(cost(rng)), double(cost(rng))});
    const SupportSets s = PartitionSupport(obs, p);
    for (ModelKind kind : {ModelKind::kConcise, ModelKind::kTolerance,
                           ModelKind::kBiobjective, ModelKind::kBigM}) {
      ModelOptions options;
      options.kind = kind;
      if (kind == ModelKind::kTolerance) options.tau = 1e-2;
      const InverseSolution sol = SolveInverse(p, obs, c_ring, options);
      ASSERT_TRUE(sol.lp_certificate.has_value());
      const double z = sol.lp_certificate->objective;
      EXPECT_LE(std::abs(sol.eps_total() - (sol.c_hat.dot(obs.x_hat) - z)),
                1e-6 * (1 + std::abs(z)));
      EXPECT_TRUE((sol.c_hat - ReferenceCost(p, c_ring) - sol.f + sol.g)
                      .cwiseAbs()
                      .maxCoeff() <= 1e-9);
      if (kind == ModelKind::kConcise) EXPECT_NEAR(sol.l1_deviation(), 0, 1e-9);
      if (kind == ModelKind::kTolerance) {
        EXPECT_LE(sol.eps_total(), 1e-2 * sol.l1_deviation() + 1e-9);
      }
      ++checked;
    }
    (void)s;
  }
  EXPECT_GT(checked, 100);
}

}  // namespace
}  // namespace invopt
