#ifndef INVOPT_LP_H_
#define INVOPT_LP_H_

// Dense two-phase primal simplex with dual certificates.
//
// Models are min c'x over general rows and per-variable bounds. Internally
// every variable is shifted or split to x >= 0, upper bounds become rows,
// and the tableau runs Dantzig pricing with a switch to Bland's rule after
// 5 * (m + n) consecutive degenerate pivots. The final basis is refactored
// with an LU decomposition to produce clean primal values and row duals.
//
// Sign conventions for a solved model (min c'x):
//   s = c - A'y,
//   y_i <= 0 on <= rows, y_i >= 0 on >= rows, free on equalities,
//   s_j >= 0 unless x_j sits at a finite upper bound, s_j <= 0 unless x_j
//   sits at a finite lower bound.

#include <limits>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "invopt/model.h"

namespace invopt {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

struct LinearRow {
  Eigen::VectorXd coeffs;
  Relation relation = Relation::kLessEqual;
  double rhs = 0.0;
};

struct LpModel {
  LpModel() = default;
  explicit LpModel(int num_vars)
      : objective(Eigen::VectorXd::Zero(num_vars)),
        lower(Eigen::VectorXd::Zero(num_vars)),
        upper(Eigen::VectorXd::Constant(num_vars, kInfinity)) {}

  int num_vars() const { return static_cast<int>(objective.size()); }
  int num_rows() const { return static_cast<int>(rows.size()); }

  void SetFree(int j) {
    lower(j) = -kInfinity;
    upper(j) = kInfinity;
  }
  bool is_free(int j) const {
    return lower(j) == -kInfinity && upper(j) == kInfinity;
  }
  int AddRow(Eigen::VectorXd coeffs, Relation relation, double rhs) {
    rows.push_back({std::move(coeffs), relation, rhs});
    return num_rows() - 1;
  }

  Eigen::VectorXd objective;
  std::vector<LinearRow> rows;
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;
};

enum class LpStatus { kOptimal, kInfeasible, kUnbounded };
std::string_view LpStatusName(LpStatus status);

struct LpSolution {
  LpStatus status = LpStatus::kInfeasible;
  Eigen::VectorXd x;  // primal
  Eigen::VectorXd y;  // row duals
  Eigen::VectorXd s;  // reduced costs
  double objective = 0.0;
  int iterations = 0;
};

struct SimplexOptions {
  double pivot_tol = 1e-9;
  double optimality_tol = 1e-9;
  double feasibility_tol = 1e-7;
  // Hard stop after this many pivots per phase, scaled by (m + n).
  int max_pivots_factor = 200;
};

// Throws Error(kNumericalFailure) if the pivot budget runs out even after
// the Bland fallback is engaged.
LpSolution SolveLp(const LpModel& model, const SimplexOptions& options = {});

struct CertificateReport {
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  double complementarity = 0.0;  // max per-coordinate violation
  double duality_gap = 0.0;      // |c'x - dual objective|
};

CertificateReport CheckCertificate(const LpModel& model,
                                   const LpSolution& solution);

// Forward LP relaxation min c'x, Ax = b, x >= 0 of a standard-form problem.
LpModel RelaxationModel(const ForwardProblem& p, const Eigen::VectorXd& cost);

}  // namespace invopt

#endif  // INVOPT_LP_H_
