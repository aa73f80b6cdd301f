#include "invopt/lp.h"

#include <gtest/gtest.h>

#include <random>

#include "invopt/error.h"
#include "invopt/oracle.h"
#include "test_util.h"
#include "textbook_simplex.h"

namespace invopt {
namespace {

using testing::Ex1;
using testing::Vec;

TEST(SolveLp, Ex1RelaxationAtM) {
  const ForwardProblem p = Ex1();
  const LpModel model = RelaxationModel(p, Vec({4.0 / 3, 1, 0, 0, 0, 0}));
  const LpSolution sol = SolveLp(model);
  ASSERT_EQ(sol.status, LpStatus::kOptimal);
  EXPECT_NEAR(sol.objective, 19.0 / 3, 1e-10);
  // The cost is parallel to row 1, so the whole edge K-M is optimal.
  EXPECT_NEAR(-4 * sol.x(0) - 3 * sol.x(1), -19, 1e-10);
  EXPECT_GE(sol.x(0), 44.0 / 29 - 1e-10);
  EXPECT_LE(sol.x(0), 11.0 / 3 + 1e-10);
  const CertificateReport r = CheckCertificate(model, sol);
  EXPECT_LE(r.primal_residual, 1e-9);
  EXPECT_LE(r.dual_residual, 1e-9);
  EXPECT_LE(r.duality_gap, 1e-9);
}

TEST(SolveLp, ZeroObjective) {
  const LpSolution sol = SolveLp(RelaxationModel(Ex1(), Vec({0, 0, 0, 0, 0, 0})));
  ASSERT_EQ(sol.status, LpStatus::kOptimal);
  EXPECT_EQ(sol.objective, 0.0);
}

TEST(SolveLp, Ex1MatchesVertexEnumeration) {
  const ForwardProblem p = Ex1();
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.1, 5.0);
  std::uniform_real_distribution<double> v(-1.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    // The region is unbounded up-right only when both costs are negative;
    // keep c1 positive so every draw is bounded.
    Eigen::Vector2d c(u(rng), v(rng) + 0.5 * u(rng));
    if (c(1) < 0) c(1) = -c(1);
    double best = 1e300;
    for (const auto& w : testing::Ex1Vertices()) best = std::min(best, c.dot(w));
    EXPECT_NEAR(best, VertexMinimum2d(p, c), 1e-9);
    const LpSolution sol = SolveLp(RelaxationModel(p, ExpandCost(p, c)));
    ASSERT_EQ(sol.status, LpStatus::kOptimal);
    EXPECT_NEAR(sol.objective, best, 1e-9);
  }
}

TEST(SolveLp, InfeasibleAndUnbounded) {
  LpModel infeasible(2);
  infeasible.AddRow(Vec({0, 0}), Relation::kLessEqual, -1);
  EXPECT_EQ(SolveLp(infeasible).status, LpStatus::kInfeasible);

  LpModel unbounded(2);
  unbounded.objective = Vec({-1, 0});
  unbounded.AddRow(Vec({0, 1}), Relation::kLessEqual, 1);
  EXPECT_EQ(SolveLp(unbounded).status, LpStatus::kUnbounded);
}

TEST(SolveLp, FreeAndBoundedVariables) {
  // min x - y with x free, -2 <= x, y in [0, 3], x + y >= -1.
  LpModel model(2);
  model.objective = Vec({1, -1});
  model.SetFree(0);
  model.lower(0) = -2;
  model.upper(1) = 3;
  model.AddRow(Vec({1, 1}), Relation::kGreaterEqual, -1);
  const LpSolution sol = SolveLp(model);
  ASSERT_EQ(sol.status, LpStatus::kOptimal);
  EXPECT_NEAR(sol.objective, -5, 1e-10);
  const CertificateReport r = CheckCertificate(model, sol);
  EXPECT_LE(r.dual_residual, 1e-9);
  EXPECT_LE(r.duality_gap, 1e-9);
  EXPECT_LE(r.complementarity, 1e-9);
}

TEST(SolveLp, RedundantEqualityRows) {
  LpModel model(3);
  model.objective = Vec({1, 2, 3});
  model.AddRow(Vec({1, 1, 1}), Relation::kEqual, 3);
  model.AddRow(Vec({2, 2, 2}), Relation::kEqual, 6);
  model.AddRow(Vec({1, 0, -1}), Relation::kEqual, 0);
  const LpSolution sol = SolveLp(model);
  ASSERT_EQ(sol.status, LpStatus::kOptimal);
  EXPECT_NEAR(sol.objective, 6, 1e-10);
  const CertificateReport r = CheckCertificate(model, sol);
  EXPECT_LE(r.primal_residual, 1e-9);
  EXPECT_LE(r.dual_residual, 1e-9);
  EXPECT_LE(r.duality_gap, 1e-9);
}

TEST(CheckCertificate, PerturbedPrimalShowsResidual) {
  const ForwardProblem p = Ex1();
  const LpModel model = RelaxationModel(p, Vec({4.0 / 3, 1, 0, 0, 0, 0}));
  LpSolution sol = SolveLp(model);
  sol.x(0) += 1e-3;
  const double column_norm = p.A.col(0).cwiseAbs().maxCoeff();
  EXPECT_NEAR(CheckCertificate(model, sol).primal_residual,
              column_norm * 1e-3, 1e-9);
}

TEST(SolveLp, AgreesWithTextbookTableau) {
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<int> dim_m(1, 15), dim_n(1, 25);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int trial = 0; trial < 200; ++trial) {
    const int m = dim_m(rng), n = dim_n(rng);
    testing::TextbookSimplex::Vvd a(m, std::vector<double>(n));
    std::vector<double> b(m), c(n);
    LpModel model(n);
    for (int i = 0; i < m; ++i) {
      Eigen::VectorXd row(n);
      for (int j = 0; j < n; ++j) row(j) = a[i][j] = u(rng);
      b[i] = u(rng) + 0.5;
      model.AddRow(row, Relation::kLessEqual, b[i]);
    }
    for (int j = 0; j < n; ++j) {
      c[j] = u(rng);
      model.objective(j) = -c[j];
    }
    testing::TextbookSimplex ref(a, b, c);
    const double expected = ref.Solve();
    const LpSolution sol = SolveLp(model);
    if (std::isinf(expected)) {
      EXPECT_EQ(sol.status, expected > 0 ? LpStatus::kUnbounded
                                         : LpStatus::kInfeasible);
      continue;
    }
    ASSERT_EQ(sol.status, LpStatus::kOptimal) << trial;
    EXPECT_NEAR(-sol.objective, expected, 1e-6) << trial;
  }
}

}  // namespace
}  // namespace invopt
