#include "invopt/closed_form.h"

#include <cmath>

#include "invopt/error.h"
#include "invopt/lp.h"

namespace invopt {

std::string_view ClosedFormCaseName(ClosedFormCase c) {
  switch (c) {
    case ClosedFormCase::kRowNormal: return "row-normal";
    case ClosedFormCase::kZeroEntry: return "zero-entry";
    case ClosedFormCase::kZeroSlack: return "zero-slack";
    case ClosedFormCase::kInteriorRow: return "interior-row";
    case ClosedFormCase::kInteriorVariable: return "interior-variable";
  }
  return "unknown";
}

namespace {

ClosedFormSolution Blank(int m, int n) {
  ClosedFormSolution sol;
  sol.y = Eigen::VectorXd::Zero(m);
  sol.c = Eigen::VectorXd::Zero(n);
  sol.s = Eigen::VectorXd::Zero(n);
  sol.eps = Eigen::VectorXd::Zero(n);
  sol.eps_sigma = Eigen::VectorXd::Zero(m);
  sol.sigma_dual = Eigen::VectorXd::Zero(m);
  return sol;
}

int FirstBelow(const Eigen::VectorXd& v, double tol) {
  for (int i = 0; i < v.size(); ++i) {
    if (v(i) <= tol) return i;
  }
  return -1;
}

// Residuals of the column constraints shared by IOP and IOP2.
double ColumnResidual(const Eigen::MatrixXd& a, const Eigen::VectorXd& x_hat,
                      const ClosedFormSolution& sol, double support_tol) {
  double worst = std::abs(sol.c.lpNorm<1>() - 1.0);
  const Eigen::VectorXd aty = a.transpose() * sol.y;
  for (int i = 0; i < x_hat.size(); ++i) {
    double r;
    if (x_hat(i) > support_tol) {
      r = aty(i) + sol.eps(i) / x_hat(i) - sol.c(i);
      worst = std::max({worst, -sol.eps(i), std::abs(sol.s(i))});
    } else {
      r = aty(i) + sol.s(i) - sol.c(i);
      worst = std::max({worst, -sol.s(i), std::abs(sol.eps(i))});
    }
    worst = std::max(worst, std::abs(r));
  }
  return worst;
}

}  // namespace

Iop2Data Iop2FromObservation(const ForwardProblem& p, const Observation& obs) {
  const int m = p.num_rows();
  const int ns = p.structural_count;
  Iop2Data data;
  data.a = p.A.leftCols(ns);
  data.x_hat = obs.x_hat.head(ns);
  data.sigma_hat = Eigen::VectorXd(m);
  for (int r = 0; r < m; ++r) {
    const double sign = p.slack_sign(r);
    if (sign == 0.0) {
      throw Error(ErrorCode::kUnsupportedForm,
                  "IOP2 needs every row to be an inequality", r);
    }
    data.a.row(r) *= sign;
    data.sigma_hat(r) = obs.x_hat(*p.slack_of_row[r]);
  }
  return data;
}

ClosedFormSolution IopClosedForm(const Eigen::MatrixXd& a,
                                 const Eigen::VectorXd& x_hat, int row,
                                 double support_tol) {
  const int m = static_cast<int>(a.rows());
  const int n = static_cast<int>(a.cols());
  ClosedFormSolution sol = Blank(m, n);
  const int zero = FirstBelow(x_hat, support_tol);
  if (zero >= 0) {
    sol.c(zero) = 1.0;
    sol.s(zero) = 1.0;
    sol.p = zero;
    sol.case_tag = ClosedFormCase::kZeroEntry;
    return sol;
  }
  if (row < 0) {
    for (int r = 0; r < m && row < 0; ++r) {
      if (a.row(r).lpNorm<1>() > 0) row = r;
    }
  }
  if (row < 0 || row >= m || a.row(row).lpNorm<1>() == 0) {
    throw Error(ErrorCode::kDegenerateMatrix, "no nonzero row to normalize");
  }
  const double norm = a.row(row).lpNorm<1>();
  sol.y(row) = 1.0 / norm;
  sol.c = a.row(row).transpose() / norm;
  sol.p = row;
  sol.case_tag = ClosedFormCase::kRowNormal;
  return sol;
}

ClosedFormSolution Iop2ClosedForm(const Iop2Data& data, double support_tol) {
  const int m = static_cast<int>(data.a.rows());
  const int ns = static_cast<int>(data.a.cols());
  ClosedFormSolution sol = Blank(m, ns);

  const int zero_x = FirstBelow(data.x_hat, support_tol);
  if (zero_x >= 0) {
    sol.c(zero_x) = 1.0;
    sol.s(zero_x) = 1.0;
    sol.p = zero_x;
    sol.case_tag = ClosedFormCase::kZeroEntry;
    return sol;
  }
  for (int r = 0; r < m; ++r) {
    if (data.sigma_hat(r) > support_tol) continue;
    const double norm = data.a.row(r).lpNorm<1>();
    if (norm == 0) continue;
    // c = -a_p / |a_p| keeps every column constraint tight with zero
    // eps and s; row p carries the dual slack.
    sol.y(r) = -1.0 / norm;
    sol.c = -data.a.row(r).transpose() / norm;
    sol.sigma_dual(r) = 1.0 / norm;
    sol.p = r;
    sol.case_tag = ClosedFormCase::kZeroSlack;
    return sol;
  }

  int var = 0;
  for (int i = 1; i < ns; ++i) {
    if (data.x_hat(i) < data.x_hat(var)) var = i;
  }
  int tight = -1;
  double ratio = kInfinity;
  for (int r = 0; r < m; ++r) {
    const double norm = data.a.row(r).lpNorm<1>();
    if (norm == 0) continue;
    const double q = data.sigma_hat(r) / norm;
    if (q < ratio) {
      ratio = q;
      tight = r;
    }
  }
  if (tight >= 0 && ratio <= data.x_hat(var)) {
    const double norm = data.a.row(tight).lpNorm<1>();
    sol.y(tight) = -1.0 / norm;
    sol.c = -data.a.row(tight).transpose() / norm;
    sol.eps_sigma(tight) = ratio;
    sol.objective = ratio;
    sol.p = tight;
    sol.case_tag = ClosedFormCase::kInteriorRow;
  } else {
    sol.c(var) = 1.0;
    sol.eps(var) = data.x_hat(var);
    sol.objective = data.x_hat(var);
    sol.p = var;
    sol.case_tag = ClosedFormCase::kInteriorVariable;
  }
  return sol;
}

double IopResidual(const Eigen::MatrixXd& a, const Eigen::VectorXd& x_hat,
                   const ClosedFormSolution& sol, double support_tol) {
  return std::max(ColumnResidual(a, x_hat, sol, support_tol),
                  std::abs(sol.objective - sol.eps.sum()));
}

double Iop2Residual(const Iop2Data& data, const ClosedFormSolution& sol,
                    double support_tol) {
  double worst = ColumnResidual(data.a, data.x_hat, sol, support_tol);
  for (int r = 0; r < data.a.rows(); ++r) {
    if (data.sigma_hat(r) > support_tol) {
      worst = std::max({worst,
                        std::abs(sol.y(r) + sol.eps_sigma(r) / data.sigma_hat(r)),
                        -sol.eps_sigma(r), std::abs(sol.sigma_dual(r))});
    } else {
      worst = std::max({worst, std::abs(sol.y(r) + sol.sigma_dual(r)),
                        -sol.sigma_dual(r), std::abs(sol.eps_sigma(r))});
    }
  }
  return std::max(worst, std::abs(sol.objective - sol.eps.sum() -
                                  sol.eps_sigma.sum()));
}

double Iop2ObjectiveOracle(const Iop2Data& data, double support_tol) {
  const int m = static_cast<int>(data.a.rows());
  const int ns = static_cast<int>(data.a.cols());
  if (ns > 10) {
    throw Error(ErrorCode::kSizeLimit, "sign enumeration limited to 10 columns");
  }
  // Layout: y (m, <= 0), c (ns, sign fixed per pattern), then one
  // nonnegative multiplier per column (eps or s) and per row (eps_sigma or
  // sigma_dual).
  const int nv = m + ns + ns + m;
  double best = kInfinity;
  for (int pattern = 0; pattern < (1 << ns); ++pattern) {
    LpModel model(nv);
    for (int r = 0; r < m; ++r) {
      model.lower(r) = -kInfinity;
      model.upper(r) = 0.0;
    }
    Eigen::VectorXd norm_row = Eigen::VectorXd::Zero(nv);
    for (int j = 0; j < ns; ++j) {
      const bool negative = (pattern >> j) & 1;
      if (negative) {
        model.lower(m + j) = -kInfinity;
        model.upper(m + j) = 0.0;
      }
      norm_row(m + j) = negative ? -1.0 : 1.0;
    }
    model.AddRow(norm_row, Relation::kEqual, 1.0);
    for (int i = 0; i < ns; ++i) {
      Eigen::VectorXd row = Eigen::VectorXd::Zero(nv);
      row.head(m) = data.a.col(i);
      row(m + i) = -1.0;
      const int mult = m + ns + i;
      if (data.x_hat(i) > support_tol) {
        row(mult) = 1.0 / data.x_hat(i);
        model.objective(mult) = 1.0;
      } else {
        row(mult) = 1.0;
      }
      model.AddRow(row, Relation::kEqual, 0.0);
    }
    for (int r = 0; r < m; ++r) {
      Eigen::VectorXd row = Eigen::VectorXd::Zero(nv);
      row(r) = 1.0;
      const int mult = m + 2 * ns + r;
      if (data.sigma_hat(r) > support_tol) {
        row(mult) = 1.0 / data.sigma_hat(r);
        model.objective(mult) = 1.0;
      } else {
        row(mult) = 1.0;
      }
      model.AddRow(row, Relation::kEqual, 0.0);
    }
    const LpSolution sol = SolveLp(model);
    if (sol.status == LpStatus::kOptimal) best = std::min(best, sol.objective);
  }
  return best;
}

}  // namespace invopt
