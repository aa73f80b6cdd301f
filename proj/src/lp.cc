#include "invopt/lp.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "invopt/error.h"

namespace invopt {

std::string_view LpStatusName(LpStatus status) {
  switch (status) {
    case LpStatus::kOptimal: return "optimal";
    case LpStatus::kInfeasible: return "infeasible";
    case LpStatus::kUnbounded: return "unbounded";
  }
  return "unknown";
}

namespace {

using RowMajorMatrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// x_j = offset + sign * x'[pos] - x'[neg], with x' >= 0.
struct VariableMap {
  int pos = -1;
  int neg = -1;
  double offset = 0.0;
  double sign = 1.0;
};

// Standard form min c'x, Ax = b (b >= 0), x >= 0 plus bookkeeping to map a
// solution back to the caller's variables and rows.
struct StandardForm {
  Eigen::MatrixXd A;
  Eigen::VectorXd b;
  Eigen::VectorXd c;
  int num_structural = 0;          // columns before slacks
  int num_columns = 0;             // structural + slacks
  std::vector<VariableMap> vars;   // one per model variable
  std::vector<bool> negated;       // per standard row
  std::vector<int> initial_basic;  // -1 where an artificial is needed
  bool trivially_infeasible = false;
};

StandardForm BuildStandardForm(const LpModel& model) {
  const int n = model.num_vars();
  StandardForm sf;
  sf.vars.resize(n);

  struct BoundRow {
    int col;
    double rhs;
  };
  std::vector<BoundRow> bound_rows;

  int col = 0;
  for (int j = 0; j < n; ++j) {
    const double lo = model.lower(j);
    const double hi = model.upper(j);
    VariableMap& v = sf.vars[j];
    if (std::isfinite(lo)) {
      v.pos = col++;
      v.offset = lo;
      if (std::isfinite(hi)) {
        if (hi < lo) sf.trivially_infeasible = true;
        bound_rows.push_back({v.pos, hi - lo});
      }
    } else if (std::isfinite(hi)) {
      v.pos = col++;
      v.offset = hi;
      v.sign = -1.0;
    } else {
      v.pos = col++;
      v.neg = col++;
    }
  }
  sf.num_structural = col;

  const int m_model = model.num_rows();
  const int m = m_model + static_cast<int>(bound_rows.size());
  int num_slacks = 0;
  for (const auto& row : model.rows) {
    if (row.relation != Relation::kEqual) ++num_slacks;
  }
  num_slacks += static_cast<int>(bound_rows.size());
  sf.num_columns = sf.num_structural + num_slacks;

  sf.A = Eigen::MatrixXd::Zero(m, sf.num_columns);
  sf.b = Eigen::VectorXd::Zero(m);
  sf.c = Eigen::VectorXd::Zero(sf.num_columns);
  sf.negated.assign(m, false);
  sf.initial_basic.assign(m, -1);

  for (int j = 0; j < n; ++j) {
    const VariableMap& v = sf.vars[j];
    sf.c(v.pos) += v.sign * model.objective(j);
    if (v.neg >= 0) sf.c(v.neg) -= model.objective(j);
  }

  int slack = sf.num_structural;
  std::vector<double> slack_coeff(m, 0.0);
  std::vector<int> slack_col(m, -1);
  for (int i = 0; i < m_model; ++i) {
    const LinearRow& row = model.rows[i];
    double rhs = row.rhs;
    for (int j = 0; j < n; ++j) {
      const double a = row.coeffs(j);
      if (a == 0.0) continue;
      const VariableMap& v = sf.vars[j];
      rhs -= a * v.offset;
      sf.A(i, v.pos) += a * v.sign;
      if (v.neg >= 0) sf.A(i, v.neg) -= a;
    }
    sf.b(i) = rhs;
    if (row.relation != Relation::kEqual) {
      slack_coeff[i] = row.relation == Relation::kLessEqual ? 1.0 : -1.0;
      slack_col[i] = slack;
      sf.A(i, slack++) = slack_coeff[i];
    }
  }
  for (size_t k = 0; k < bound_rows.size(); ++k) {
    const int i = m_model + static_cast<int>(k);
    sf.A(i, bound_rows[k].col) = 1.0;
    sf.b(i) = bound_rows[k].rhs;
    slack_coeff[i] = 1.0;
    slack_col[i] = slack;
    sf.A(i, slack++) = 1.0;
  }

  for (int i = 0; i < m; ++i) {
    if (sf.b(i) < 0) {
      sf.A.row(i) *= -1.0;
      sf.b(i) = -sf.b(i);
      sf.negated[i] = true;
      slack_coeff[i] = -slack_coeff[i];
    }
    if (slack_coeff[i] > 0) sf.initial_basic[i] = slack_col[i];
  }
  return sf;
}

class Tableau {
 public:
  Tableau(const StandardForm& sf, const SimplexOptions& options)
      : sf_(sf), options_(options) {
    m_ = static_cast<int>(sf.A.rows());
    n_ = sf.num_columns;
    basis_.assign(m_, -1);
    unit_col_.assign(m_, -1);
    int num_art = 0;
    for (int i = 0; i < m_; ++i) {
      if (sf.initial_basic[i] < 0) ++num_art;
    }
    total_ = n_ + num_art;
    T_ = RowMajorMatrix::Zero(m_, total_ + 1);
    if (m_ > 0) {
      T_.leftCols(n_) = sf.A;
      T_.col(total_) = sf.b;
    }
    int art = n_;
    for (int i = 0; i < m_; ++i) {
      if (sf.initial_basic[i] >= 0) {
        basis_[i] = sf.initial_basic[i];
      } else {
        T_(i, art) = 1.0;
        basis_[i] = art++;
      }
      unit_col_[i] = basis_[i];
    }
  }

  int pivots() const { return pivots_; }

  // Phase 1: drive artificials to zero. Returns false if infeasible.
  bool PhaseOne() {
    Eigen::VectorXd cost = Eigen::VectorXd::Zero(total_);
    for (int j = n_; j < total_; ++j) cost(j) = 1.0;
    PriceOut(cost);
    const LpStatus status = Run(total_);
    if (status != LpStatus::kOptimal) {
      throw Error(ErrorCode::kNumericalFailure,
                  "phase one reported an unbounded auxiliary problem");
    }
    const double infeasibility = -d_(total_);
    const double scale =
        1.0 + (m_ > 0 ? sf_.b.lpNorm<Eigen::Infinity>() : 0.0);
    if (infeasibility > options_.feasibility_tol * scale) return false;

    // Pivot remaining artificials out of the basis wherever possible; rows
    // where that is impossible are redundant and keep a zero artificial.
    for (int r = 0; r < m_; ++r) {
      if (basis_[r] < n_) continue;
      int best = -1;
      double best_abs = options_.pivot_tol;
      for (int j = 0; j < n_; ++j) {
        const double a = std::abs(T_(r, j));
        if (a > best_abs) {
          best_abs = a;
          best = j;
        }
      }
      if (best >= 0) Pivot(r, best);
    }
    return true;
  }

  LpStatus PhaseTwo() {
    Eigen::VectorXd cost = Eigen::VectorXd::Zero(total_);
    cost.head(n_) = sf_.c;
    PriceOut(cost);
    return Run(n_);
  }

  const std::vector<int>& basis() const { return basis_; }
  int num_columns() const { return n_; }

  // Primal values and duals read straight from the tableau.
  Eigen::VectorXd TableauPrimal() const {
    Eigen::VectorXd x = Eigen::VectorXd::Zero(n_);
    for (int r = 0; r < m_; ++r) {
      if (basis_[r] < n_) x(basis_[r]) = T_(r, total_);
    }
    return x;
  }
  Eigen::VectorXd TableauDual() const {
    // Every row owns a unit column (slack with +1 or artificial) whose
    // reduced cost is c_unit - y_r; phase two prices artificials at zero.
    Eigen::VectorXd y(m_);
    for (int r = 0; r < m_; ++r) {
      const int j = unit_col_[r];
      const double c = j < n_ ? sf_.c(j) : 0.0;
      y(r) = c - d_(j);
    }
    return y;
  }

 private:
  void PriceOut(const Eigen::VectorXd& cost) {
    d_ = Eigen::RowVectorXd::Zero(total_ + 1);
    d_.head(total_) = cost.transpose();
    for (int r = 0; r < m_; ++r) {
      const double cb = cost(basis_[r]);
      if (cb != 0.0) d_ -= cb * T_.row(r);
    }
  }

  void Pivot(int r, int e) {
    const double pivot = T_(r, e);
    T_.row(r) /= pivot;
    T_(r, e) = 1.0;
    for (int i = 0; i < m_; ++i) {
      if (i == r) continue;
      const double f = T_(i, e);
      if (f == 0.0) continue;
      T_.row(i) -= f * T_.row(r);
      T_(i, e) = 0.0;
      if (std::abs(T_(i, total_)) < 1e-13) T_(i, total_) = 0.0;
    }
    const double f = d_(e);
    if (f != 0.0) {
      d_ -= f * T_.row(r);
      d_(e) = 0.0;
    }
    basis_[r] = e;
    ++pivots_;
  }

  // Columns [0, allowed) may enter the basis.
  LpStatus Run(int allowed) {
    std::vector<bool> is_basic(total_, false);
    for (int b : basis_) is_basic[b] = true;
    const long degenerate_limit = 5L * (m_ + n_);
    const long pivot_budget =
        static_cast<long>(options_.max_pivots_factor) * (m_ + total_ + 1) +
        1000;
    long degenerate_run = 0;
    long phase_pivots = 0;
    bool bland = false;

    while (true) {
      int enter = -1;
      double best = -options_.optimality_tol;
      for (int j = 0; j < allowed; ++j) {
        if (is_basic[j]) continue;
        if (d_(j) < best) {
          enter = j;
          if (bland) break;
          best = d_(j);
        }
      }
      if (enter < 0) return LpStatus::kOptimal;

      int leave = -1;
      double best_ratio = kInfinity;
      double best_pivot = 0.0;
      for (int r = 0; r < m_; ++r) {
        const double a = T_(r, enter);
        if (a <= options_.pivot_tol) continue;
        const double ratio = std::max(T_(r, total_), 0.0) / a;
        const double tie = 1e-12 * (1.0 + std::abs(best_ratio));
        if (leave < 0 || ratio < best_ratio - tie) {
          leave = r;
          best_ratio = ratio;
          best_pivot = a;
        } else if (ratio <= best_ratio + tie) {
          const bool better =
              bland ? basis_[r] < basis_[leave] : a > best_pivot;
          if (better) {
            leave = r;
            best_ratio = std::min(ratio, best_ratio);
            best_pivot = a;
          }
        }
      }
      if (leave < 0) return LpStatus::kUnbounded;

      if (best_ratio <= 1e-12) {
        if (++degenerate_run > degenerate_limit) bland = true;
      } else {
        degenerate_run = 0;
      }
      is_basic[basis_[leave]] = false;
      is_basic[enter] = true;
      Pivot(leave, enter);
      if (++phase_pivots > pivot_budget) {
        throw Error(ErrorCode::kNumericalFailure,
                    "simplex stalled after " + std::to_string(phase_pivots) +
                        " pivots");
      }
    }
  }

  const StandardForm& sf_;
  SimplexOptions options_;
  int m_ = 0;
  int n_ = 0;
  int total_ = 0;
  RowMajorMatrix T_;
  Eigen::RowVectorXd d_;
  std::vector<int> basis_;
  std::vector<int> unit_col_;
  int pivots_ = 0;
};

Eigen::VectorXd MapPrimal(const LpModel& model, const StandardForm& sf,
                          const Eigen::VectorXd& x_std) {
  Eigen::VectorXd x(model.num_vars());
  for (int j = 0; j < model.num_vars(); ++j) {
    const VariableMap& v = sf.vars[j];
    x(j) = v.offset + v.sign * x_std(v.pos);
    if (v.neg >= 0) x(j) -= x_std(v.neg);
  }
  return x;
}

}  // namespace

LpSolution SolveLp(const LpModel& model, const SimplexOptions& options) {
  const int n = model.num_vars();
  if (n == 0) throw Error(ErrorCode::kSchema, "LP has no variables");
  for (const auto& row : model.rows) {
    if (row.coeffs.size() != n) {
      throw Error(ErrorCode::kSchema, "LP row has wrong length");
    }
  }

  LpSolution sol;
  const StandardForm sf = BuildStandardForm(model);
  if (sf.trivially_infeasible) {
    sol.status = LpStatus::kInfeasible;
    return sol;
  }

  Tableau tableau(sf, options);
  if (!tableau.PhaseOne()) {
    sol.status = LpStatus::kInfeasible;
    sol.iterations = tableau.pivots();
    return sol;
  }
  sol.status = tableau.PhaseTwo();
  sol.iterations = tableau.pivots();
  if (sol.status != LpStatus::kOptimal) return sol;

  const int m = static_cast<int>(sf.A.rows());
  const int ncols = sf.num_columns;
  Eigen::VectorXd x_std = tableau.TableauPrimal();
  Eigen::VectorXd y_std = tableau.TableauDual();

  // Refactor the final basis for clean values.
  if (m > 0) {
    Eigen::MatrixXd B(m, m);
    Eigen::VectorXd c_b(m);
    const auto& basis = tableau.basis();
    for (int r = 0; r < m; ++r) {
      if (basis[r] < ncols) {
        B.col(r) = sf.A.col(basis[r]);
        c_b(r) = sf.c(basis[r]);
      } else {
        B.col(r) = Eigen::VectorXd::Unit(m, r);
        c_b(r) = 0.0;
      }
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(B);
    if (lu.isInvertible()) {
      const Eigen::VectorXd x_b = lu.solve(sf.b);
      const Eigen::VectorXd y = lu.transpose().solve(c_b);
      if (x_b.allFinite() && y.allFinite()) {
        x_std.setZero();
        for (int r = 0; r < m; ++r) {
          if (basis[r] < ncols) x_std(basis[r]) = std::max(x_b(r), 0.0);
        }
        y_std = y;
      }
    }
  }

  sol.x = MapPrimal(model, sf, x_std);
  sol.y = Eigen::VectorXd::Zero(model.num_rows());
  for (int i = 0; i < model.num_rows(); ++i) {
    sol.y(i) = sf.negated[i] ? -y_std(i) : y_std(i);
  }
  sol.s = model.objective;
  for (int i = 0; i < model.num_rows(); ++i) {
    if (sol.y(i) != 0.0) sol.s -= sol.y(i) * model.rows[i].coeffs;
  }
  sol.objective = model.objective.dot(sol.x);
  return sol;
}

CertificateReport CheckCertificate(const LpModel& model,
                                   const LpSolution& sol) {
  CertificateReport rep;
  const int n = model.num_vars();

  double dual_obj = 0.0;
  for (int i = 0; i < model.num_rows(); ++i) {
    const LinearRow& row = model.rows[i];
    const double activity = row.coeffs.dot(sol.x);
    const double r = activity - row.rhs;
    double viol = 0.0;
    double dual_viol = 0.0;
    switch (row.relation) {
      case Relation::kLessEqual:
        viol = std::max(r, 0.0);
        dual_viol = std::max(sol.y(i), 0.0);
        break;
      case Relation::kGreaterEqual:
        viol = std::max(-r, 0.0);
        dual_viol = std::max(-sol.y(i), 0.0);
        break;
      case Relation::kEqual:
        viol = std::abs(r);
        break;
    }
    rep.primal_residual = std::max(rep.primal_residual, viol);
    rep.dual_residual = std::max(rep.dual_residual, dual_viol);
    if (row.relation != Relation::kEqual) {
      rep.complementarity =
          std::max(rep.complementarity, std::abs(sol.y(i) * r));
    }
    dual_obj += row.rhs * sol.y(i);
  }

  // Stationarity c - A'y - s = 0.
  Eigen::VectorXd stationarity = model.objective - sol.s;
  for (int i = 0; i < model.num_rows(); ++i) {
    stationarity -= sol.y(i) * model.rows[i].coeffs;
  }
  if (n > 0) {
    rep.dual_residual = std::max(rep.dual_residual,
                                 stationarity.lpNorm<Eigen::Infinity>());
  }

  for (int j = 0; j < n; ++j) {
    const double lo = model.lower(j);
    const double hi = model.upper(j);
    const double x = sol.x(j);
    const double s = sol.s(j);
    const double below = std::isfinite(lo) ? std::max(lo - x, 0.0) : 0.0;
    const double above = std::isfinite(hi) ? std::max(x - hi, 0.0) : 0.0;
    rep.primal_residual = std::max({rep.primal_residual, below, above});

    const double s_lo = std::max(s, 0.0);   // multiplier of x >= lo
    const double s_hi = std::max(-s, 0.0);  // multiplier of x <= hi
    if (!std::isfinite(lo)) {
      rep.dual_residual = std::max(rep.dual_residual, s_lo);
    } else {
      rep.complementarity = std::max(rep.complementarity, s_lo * (x - lo));
      dual_obj += lo * s_lo;
    }
    if (!std::isfinite(hi)) {
      rep.dual_residual = std::max(rep.dual_residual, s_hi);
    } else {
      rep.complementarity = std::max(rep.complementarity, s_hi * (hi - x));
      dual_obj -= hi * s_hi;
    }
  }
  rep.duality_gap = std::abs(model.objective.dot(sol.x) - dual_obj);
  return rep;
}

LpModel RelaxationModel(const ForwardProblem& p, const Eigen::VectorXd& cost) {
  LpModel model(p.num_cols());
  model.objective = ExpandCost(p, cost);
  for (int i = 0; i < p.num_rows(); ++i) {
    model.AddRow(p.A.row(i).transpose(), Relation::kEqual, p.b(i));
  }
  return model;
}

}  // namespace invopt
