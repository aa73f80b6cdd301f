#ifndef INVOPT_MODEL_H_
#define INVOPT_MODEL_H_

// Problem ingestion and the standard form shared by every inverse model.
//
// A RawProblem is what users write: rows a_i x {<=,=,>=} b_i over structural
// variables with x >= 0 and optional finite upper bounds. Standardize() turns
// it into Ax = b, x >= 0 by appending one slack column per inequality row
// (and per finite upper bound). Slack columns follow the structural columns
// in row order; a <= row gets a +1 slack, a >= row a -1 slack, so b keeps the
// sign the user wrote.

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace invopt {

enum class Relation { kLessEqual, kEqual, kGreaterEqual };

struct Tolerances {
  double feasibility = 1e-7;
  double integrality = 1e-6;
  double support = 1e-9;
};

struct RawConstraint {
  std::vector<double> coeffs;
  Relation relation = Relation::kLessEqual;
  double rhs = 0.0;
};

struct RawProblem {
  std::string name;
  int num_vars = 0;
  std::vector<RawConstraint> constraints;
  // Empty means all zero. Anything but zero is rejected by Standardize().
  std::vector<double> lower_bounds;
  // Empty means no upper bounds; nullopt entries are unbounded.
  std::vector<std::optional<double>> upper_bounds;
  // Empty means all continuous.
  std::vector<bool> integer;
};

struct ForwardProblem {
  std::string name;
  Eigen::MatrixXd A;  // m x n, structural columns first, then slacks
  Eigen::VectorXd b;
  std::vector<bool> integer;               // size n, slacks never integer
  std::vector<std::optional<int>> slack_of_row;  // size m
  int structural_count = 0;

  int num_rows() const { return static_cast<int>(A.rows()); }
  int num_cols() const { return static_cast<int>(A.cols()); }
  bool is_slack(int col) const { return col >= structural_count; }
  // +1 for a <= row, -1 for a >= row, 0 for an equality row.
  double slack_sign(int row) const;
  Relation relation(int row) const;
  // Row owning slack column `col`, or -1 for a structural column.
  int row_of_slack(int col) const;
  auto structural_block() const {
    return A.leftCols(structural_count);
  }
  bool has_integers() const;
};

struct Observation {
  Eigen::VectorXd x_hat;  // structural values followed by derived slacks
  double feasibility_residual = 0.0;
  double integrality_residual = 0.0;
};

struct SupportSets {
  std::vector<int> in;         // x_hat_i > support_tol
  std::vector<int> out;        // the complement
  std::vector<int> in_sigma;   // `in` restricted to slack columns
  std::vector<int> out_sigma;  // `out` restricted to slack columns
};

ForwardProblem Standardize(const RawProblem& raw);

// Structural values only; slack values are always derived from b - A x.
Observation AttachObservation(const ForwardProblem& p,
                              const Eigen::VectorXd& x_struct,
                              const Tolerances& tol = {});

SupportSets PartitionSupport(const Observation& obs, const ForwardProblem& p,
                             double support_tol = Tolerances{}.support);

// Reference cost over all n columns with zero slack entries.
Eigen::VectorXd ReferenceCost(const ForwardProblem& p,
                              const Eigen::VectorXd& c_struct);

// Pads a structural cost with zero slack costs; full-length input passes
// through unchanged.
Eigen::VectorXd ExpandCost(const ForwardProblem& p, const Eigen::VectorXd& c);

// Full standard-form point (structural values plus implied slacks) for a
// structural assignment. No feasibility check.
Eigen::VectorXd CompletePoint(const ForwardProblem& p,
                              const Eigen::VectorXd& x_struct);

}  // namespace invopt

#endif  // INVOPT_MODEL_H_
