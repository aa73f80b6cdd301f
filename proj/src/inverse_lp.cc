#include "invopt/inverse_lp.h"

#include <cmath>

#include "invopt/error.h"
#include "invopt/lp.h"

namespace invopt {

namespace {

int Rank(const Eigen::MatrixXd& m) {
  if (m.cols() == 0) return 0;
  Eigen::FullPivLU<Eigen::MatrixXd> lu(m);
  lu.setThreshold(1e-10);
  return static_cast<int>(lu.rank());
}

Eigen::MatrixXd Columns(const Eigen::MatrixXd& a, const std::vector<int>& cols) {
  Eigen::MatrixXd out(a.rows(), static_cast<Eigen::Index>(cols.size()));
  for (size_t k = 0; k < cols.size(); ++k) out.col(k) = a.col(cols[k]);
  return out;
}

// Variable layout shared by both inverse LPs: optional free y block, then
// (f_j, g_j) pairs for structural columns.
struct SplitLayout {
  int y_offset = 0;
  int m = 0;
  int ns = 0;
  int f(int j) const { return y_offset + m + 2 * j; }
  int g(int j) const { return y_offset + m + 2 * j + 1; }
  int total() const { return y_offset + m + 2 * ns; }
};

Eigen::VectorXd CostFromSplit(const ForwardProblem& p, const SplitLayout& lay,
                              const Eigen::VectorXd& c_ring,
                              const Eigen::VectorXd& x) {
  Eigen::VectorXd c = c_ring;
  for (int j = 0; j < p.structural_count; ++j) {
    c(j) += x(lay.f(j)) - x(lay.g(j));
  }
  // Slack entries stay at reference zero.
  for (int j = p.structural_count; j < p.num_cols(); ++j) c(j) = 0.0;
  return c;
}

}  // namespace

InverseLpResult InverseLpBasis(const ForwardProblem& p, const Observation& obs,
                               const Eigen::VectorXd& c_ring,
                               double support_tol) {
  const int m = p.num_rows();
  const int n = p.num_cols();
  const Eigen::VectorXd c0 = ExpandCost(p, c_ring);

  std::vector<int> basis;
  for (int j = 0; j < n; ++j) {
    if (obs.x_hat(j) > support_tol) basis.push_back(j);
  }
  if (Rank(Columns(p.A, basis)) < static_cast<int>(basis.size())) {
    throw Error(ErrorCode::kNotExtreme,
                "observation is not an extreme point; use the "
                "complementarity model");
  }
  for (int j = 0; j < n && static_cast<int>(basis.size()) < m; ++j) {
    if (obs.x_hat(j) > support_tol) continue;
    std::vector<int> trial = basis;
    trial.push_back(j);
    if (Rank(Columns(p.A, trial)) == static_cast<int>(trial.size())) {
      basis = std::move(trial);
    }
  }
  if (static_cast<int>(basis.size()) != m) {
    throw Error(ErrorCode::kDegenerateBasis,
                "no invertible basis completion exists");
  }

  std::vector<bool> in_basis(n, false);
  for (int j : basis) in_basis[j] = true;
  const Eigen::MatrixXd bmat = Columns(p.A, basis);
  const Eigen::PartialPivLU<Eigen::MatrixXd> lu(bmat);

  SplitLayout lay{0, 0, p.structural_count};
  LpModel model(lay.total());
  model.objective.setOnes();
  for (int j = 0; j < n; ++j) {
    if (in_basis[j]) continue;
    // Reduced cost c_j - c_B' B^{-1} a_j as a linear form r'c.
    const Eigen::VectorXd w = lu.solve(p.A.col(j));
    Eigen::VectorXd r = Eigen::VectorXd::Zero(n);
    r(j) = 1.0;
    for (int k = 0; k < m; ++k) r(basis[k]) -= w(k);
    Eigen::VectorXd row = Eigen::VectorXd::Zero(lay.total());
    for (int i = 0; i < p.structural_count; ++i) {
      row(lay.f(i)) = r(i);
      row(lay.g(i)) = -r(i);
    }
    model.AddRow(row, Relation::kGreaterEqual, -r.dot(c0));
  }
  const LpSolution sol = SolveLp(model);
  if (sol.status != LpStatus::kOptimal) {
    throw Error(ErrorCode::kInternal, "reduced-cost LP not solved");
  }
  InverseLpResult result;
  result.c_hat = CostFromSplit(p, lay, c0, sol.x);
  Eigen::VectorXd c_b(m);
  for (int k = 0; k < m; ++k) c_b(k) = result.c_hat(basis[k]);
  result.y = lu.transpose().solve(c_b);
  result.l1_deviation = sol.objective;
  result.basis = std::move(basis);
  return result;
}

InverseLpResult InverseLpComplementarity(const ForwardProblem& p,
                                         const Observation& obs,
                                         const Eigen::VectorXd& c_ring,
                                         double support_tol) {
  const int m = p.num_rows();
  const Eigen::VectorXd c0 = ExpandCost(p, c_ring);
  SplitLayout lay{0, m, p.structural_count};
  LpModel model(lay.total());
  for (int i = 0; i < m; ++i) model.SetFree(i);
  for (int j = 0; j < p.structural_count; ++j) {
    model.objective(lay.f(j)) = 1.0;
    model.objective(lay.g(j)) = 1.0;
  }
  for (int j = 0; j < p.num_cols(); ++j) {
    Eigen::VectorXd row = Eigen::VectorXd::Zero(lay.total());
    row.head(m) = p.A.col(j);
    if (!p.is_slack(j)) {
      row(lay.f(j)) = -1.0;
      row(lay.g(j)) = 1.0;
    }
    const Relation rel = obs.x_hat(j) > support_tol ? Relation::kEqual
                                                    : Relation::kLessEqual;
    model.AddRow(row, rel, p.is_slack(j) ? 0.0 : c0(j));
  }
  const LpSolution sol = SolveLp(model);
  if (sol.status != LpStatus::kOptimal) {
    throw Error(ErrorCode::kInternal, "complementarity LP not solved");
  }
  InverseLpResult result;
  result.c_hat = CostFromSplit(p, lay, c0, sol.x);
  result.y = sol.x.head(m);
  result.l1_deviation = sol.objective;
  return result;
}

MinGapResult MinGapLp(const ForwardProblem& p, const Observation& obs,
                      const Eigen::VectorXd& cost, double support_tol) {
  const int m = p.num_rows();
  const int n = p.num_cols();
  for (int j = 0; j < n; ++j) {
    if (obs.x_hat(j) <= support_tol) {
      throw Error(ErrorCode::kNotInterior, "observation has a zero entry", j);
    }
  }
  const Eigen::VectorXd c = ExpandCost(p, cost);
  LpModel model(m + n);
  for (int i = 0; i < m; ++i) model.SetFree(i);
  model.objective.tail(n).setOnes();
  for (int j = 0; j < n; ++j) {
    Eigen::VectorXd row = Eigen::VectorXd::Zero(m + n);
    row.head(m) = p.A.col(j);
    row(m + j) = 1.0 / obs.x_hat(j);
    model.AddRow(row, Relation::kEqual, c(j));
  }
  const LpSolution sol = SolveLp(model);
  if (sol.status != LpStatus::kOptimal) {
    throw Error(ErrorCode::kInternal, "min-gap LP not solved");
  }
  MinGapResult result;
  result.y = sol.x.head(m);
  result.eps = sol.x.tail(n);
  result.s = result.eps.cwiseQuotient(obs.x_hat);
  result.gap = sol.objective;
  return result;
}

}  // namespace invopt
