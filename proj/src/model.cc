#include "invopt/model.h"

#include <cmath>
#include <string>

#include "invopt/error.h"

namespace invopt {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kSchema: return "schema";
    case ErrorCode::kUnsupportedForm: return "unsupported-form";
    case ErrorCode::kObservationInfeasible: return "observation-infeasible";
    case ErrorCode::kObservationFractional: return "observation-fractional";
    case ErrorCode::kNumericalFailure: return "numerical-failure";
    case ErrorCode::kDegenerateBasis: return "degenerate-basis";
    case ErrorCode::kNotExtreme: return "not-extreme";
    case ErrorCode::kNotInterior: return "not-interior";
    case ErrorCode::kDegenerateMatrix: return "degenerate-matrix";
    case ErrorCode::kSizeLimit: return "size-limit";
    case ErrorCode::kToleranceInfeasible: return "tolerance-infeasible";
    case ErrorCode::kCertificateMismatch: return "certificate-mismatch";
    case ErrorCode::kInvalidShift: return "invalid-shift";
    case ErrorCode::kNoScale: return "no-scale";
    case ErrorCode::kInvalidCut: return "invalid-cut";
    case ErrorCode::kBigMTooSmall: return "big-m-too-small";
    case ErrorCode::kMasterInfeasible: return "master-infeasible";
    case ErrorCode::kInternal: return "internal";
  }
  return "unknown";
}

double ForwardProblem::slack_sign(int row) const {
  const auto& slack = slack_of_row[row];
  if (!slack) return 0.0;
  return A(row, *slack);
}

Relation ForwardProblem::relation(int row) const {
  const double sign = slack_sign(row);
  if (sign > 0) return Relation::kLessEqual;
  if (sign < 0) return Relation::kGreaterEqual;
  return Relation::kEqual;
}

int ForwardProblem::row_of_slack(int col) const {
  if (col < structural_count) return -1;
  for (int i = 0; i < num_rows(); ++i) {
    if (slack_of_row[i] && *slack_of_row[i] == col) return i;
  }
  return -1;
}

bool ForwardProblem::has_integers() const {
  for (bool flag : integer) {
    if (flag) return true;
  }
  return false;
}

ForwardProblem Standardize(const RawProblem& raw) {
  const int ns = raw.num_vars;
  if (ns <= 0) {
    throw Error(ErrorCode::kSchema, "problem needs at least one variable");
  }
  for (size_t i = 0; i < raw.constraints.size(); ++i) {
    if (static_cast<int>(raw.constraints[i].coeffs.size()) != ns) {
      throw Error(ErrorCode::kSchema,
                  "constraint " + std::to_string(i) + " has " +
                      std::to_string(raw.constraints[i].coeffs.size()) +
                      " coefficients, expected " + std::to_string(ns),
                  static_cast<int>(i));
    }
  }
  if (!raw.lower_bounds.empty() &&
      static_cast<int>(raw.lower_bounds.size()) != ns) {
    throw Error(ErrorCode::kSchema, "lower_bounds has wrong length");
  }
  for (int j = 0; j < static_cast<int>(raw.lower_bounds.size()); ++j) {
    if (raw.lower_bounds[j] != 0.0) {
      throw Error(ErrorCode::kUnsupportedForm,
                  "variable " + std::to_string(j) +
                      " has a nonzero lower bound; only x >= 0 is supported",
                  j);
    }
  }
  if (!raw.upper_bounds.empty() &&
      static_cast<int>(raw.upper_bounds.size()) != ns) {
    throw Error(ErrorCode::kSchema, "upper_bounds has wrong length");
  }
  if (!raw.integer.empty() && static_cast<int>(raw.integer.size()) != ns) {
    throw Error(ErrorCode::kSchema, "integer mask has wrong length");
  }

  // Collect rows: user constraints, then one <= row per finite upper bound.
  std::vector<RawConstraint> rows = raw.constraints;
  for (int j = 0; j < static_cast<int>(raw.upper_bounds.size()); ++j) {
    if (!raw.upper_bounds[j]) continue;
    if (!std::isfinite(*raw.upper_bounds[j])) continue;
    RawConstraint bound;
    bound.coeffs.assign(ns, 0.0);
    bound.coeffs[j] = 1.0;
    bound.relation = Relation::kLessEqual;
    bound.rhs = *raw.upper_bounds[j];
    rows.push_back(std::move(bound));
  }

  const int m = static_cast<int>(rows.size());
  int num_slacks = 0;
  for (const auto& row : rows) {
    if (row.relation != Relation::kEqual) ++num_slacks;
  }
  const int n = ns + num_slacks;

  ForwardProblem p;
  p.name = raw.name;
  p.structural_count = ns;
  p.A = Eigen::MatrixXd::Zero(m, n);
  p.b = Eigen::VectorXd::Zero(m);
  p.integer.assign(n, false);
  for (int j = 0; j < static_cast<int>(raw.integer.size()); ++j) {
    p.integer[j] = raw.integer[j];
  }
  p.slack_of_row.assign(m, std::nullopt);

  int next_slack = ns;
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < ns; ++j) p.A(i, j) = rows[i].coeffs[j];
    p.b(i) = rows[i].rhs;
    if (rows[i].relation == Relation::kEqual) continue;
    p.A(i, next_slack) = rows[i].relation == Relation::kLessEqual ? 1.0 : -1.0;
    p.slack_of_row[i] = next_slack;
    ++next_slack;
  }
  return p;
}

Eigen::VectorXd CompletePoint(const ForwardProblem& p,
                              const Eigen::VectorXd& x_struct) {
  Eigen::VectorXd x = Eigen::VectorXd::Zero(p.num_cols());
  x.head(p.structural_count) = x_struct;
  const Eigen::VectorXd lhs = p.structural_block() * x_struct;
  for (int i = 0; i < p.num_rows(); ++i) {
    if (!p.slack_of_row[i]) continue;
    x(*p.slack_of_row[i]) = p.slack_sign(i) * (p.b(i) - lhs(i));
  }
  return x;
}

Observation AttachObservation(const ForwardProblem& p,
                              const Eigen::VectorXd& x_struct,
                              const Tolerances& tol) {
  if (x_struct.size() != p.structural_count) {
    throw Error(ErrorCode::kSchema,
                "observation has " + std::to_string(x_struct.size()) +
                    " entries, expected " +
                    std::to_string(p.structural_count));
  }
  for (int j = 0; j < x_struct.size(); ++j) {
    if (!std::isfinite(x_struct(j))) {
      throw Error(ErrorCode::kSchema, "observation entry is not finite", j);
    }
    if (x_struct(j) < -tol.feasibility) {
      throw Error(ErrorCode::kObservationInfeasible,
                  "observation variable " + std::to_string(j) +
                      " is negative",
                  j);
    }
  }

  Observation obs;
  obs.x_hat = CompletePoint(p, x_struct);

  const Eigen::VectorXd residual = p.A * obs.x_hat - p.b;
  for (int i = 0; i < p.num_rows(); ++i) {
    const double violation =
        p.slack_of_row[i] ? -obs.x_hat(*p.slack_of_row[i])
                          : std::abs(residual(i));
    if (violation > tol.feasibility) {
      throw Error(ErrorCode::kObservationInfeasible,
                  "observation violates row " + std::to_string(i) + " by " +
                      std::to_string(violation),
                  i);
    }
  }
  obs.feasibility_residual =
      residual.size() ? residual.lpNorm<Eigen::Infinity>() : 0.0;

  double frac = 0.0;
  for (int j = 0; j < p.structural_count; ++j) {
    if (!p.integer[j]) continue;
    const double dist = std::abs(x_struct(j) - std::round(x_struct(j)));
    if (dist > tol.integrality) {
      throw Error(ErrorCode::kObservationFractional,
                  "integer variable " + std::to_string(j) +
                      " has fractional value",
                  j);
    }
    frac = std::max(frac, dist);
  }
  obs.integrality_residual = frac;
  return obs;
}

SupportSets PartitionSupport(const Observation& obs, const ForwardProblem& p,
                             double support_tol) {
  SupportSets sets;
  for (int i = 0; i < obs.x_hat.size(); ++i) {
    const bool positive = obs.x_hat(i) > support_tol;
    (positive ? sets.in : sets.out).push_back(i);
    if (p.is_slack(i)) {
      (positive ? sets.in_sigma : sets.out_sigma).push_back(i);
    }
  }
  return sets;
}

Eigen::VectorXd ReferenceCost(const ForwardProblem& p,
                              const Eigen::VectorXd& c_struct) {
  if (c_struct.size() != p.structural_count) {
    throw Error(ErrorCode::kSchema, "reference cost has wrong length");
  }
  return ExpandCost(p, c_struct);
}

Eigen::VectorXd ExpandCost(const ForwardProblem& p, const Eigen::VectorXd& c) {
  if (c.size() == p.num_cols()) return c;
  if (c.size() != p.structural_count) {
    throw Error(ErrorCode::kSchema, "cost vector has wrong length");
  }
  Eigen::VectorXd full = Eigen::VectorXd::Zero(p.num_cols());
  full.head(p.structural_count) = c;
  return full;
}

}  // namespace invopt
