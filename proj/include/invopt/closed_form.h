#ifndef INVOPT_CLOSED_FORM_H_
#define INVOPT_CLOSED_FORM_H_

// Closed-form optima of the unit-norm inverse problems.
//
// IOP works on an equality system A x = b over all n columns:
//   min e'eps  s.t. a_i'y + eps_i / x_i - c_i = 0 (x_i > 0),
//                   a_i'y + s_i - c_i = 0 (x_i = 0), ||c||_1 = 1.
// IOP2 works on an inequality system A x + sigma = b with zero slack costs,
// over structural columns only, and adds
//   y_r + eps_sigma_r / sigma_r = 0 (sigma_r > 0),
//   y_r + sigma_dual_r = 0 (sigma_r = 0).
// Its data are (A, x_hat, sigma_hat) supplied directly; nothing requires
// A x_hat + sigma_hat = b.

#include <cstdlib>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "invopt/model.h"

namespace invopt {

enum class ClosedFormCase {
  kRowNormal,         // IOP: y = e_p / |a_p|, c = a_p / |a_p|
  kZeroEntry,         // x_hat_p = 0: y = 0, c = e_p, s_p = 1
  kZeroSlack,         // sigma_hat_p = 0: c = -a_p / |a_p|
  kInteriorRow,       // interior, tightest row wins
  kInteriorVariable,  // interior, smallest x_hat entry wins
};
std::string_view ClosedFormCaseName(ClosedFormCase c);

struct ClosedFormSolution {
  Eigen::VectorXd y;
  Eigen::VectorXd c;
  Eigen::VectorXd s;           // per column, nonzero only where x_hat = 0
  Eigen::VectorXd eps;         // per column, nonzero only where x_hat > 0
  Eigen::VectorXd eps_sigma;   // per row, IOP2 only
  Eigen::VectorXd sigma_dual;  // per row, IOP2 only
  double objective = 0.0;
  int p = -1;
  ClosedFormCase case_tag = ClosedFormCase::kRowNormal;
};

// Rows written as a x <= b; >= rows are negated so sigma_hat stays >= 0.
struct Iop2Data {
  Eigen::MatrixXd a;  // m x n_s
  Eigen::VectorXd x_hat;
  Eigen::VectorXd sigma_hat;
};

// Throws kUnsupportedForm if the problem has equality rows.
Iop2Data Iop2FromObservation(const ForwardProblem& p, const Observation& obs);

// `row` selects p for the row-normal case; -1 picks the first nonzero row.
// Throws kDegenerateMatrix when every row is zero.
ClosedFormSolution IopClosedForm(const Eigen::MatrixXd& a,
                                 const Eigen::VectorXd& x_hat, int row = -1,
                                 double support_tol = Tolerances{}.support);

ClosedFormSolution Iop2ClosedForm(const Iop2Data& data,
                                  double support_tol = Tolerances{}.support);

// Largest violation of any IOP / IOP2 constraint, sign condition or the
// objective definition.
double IopResidual(const Eigen::MatrixXd& a, const Eigen::VectorXd& x_hat,
                   const ClosedFormSolution& sol,
                   double support_tol = Tolerances{}.support);
double Iop2Residual(const Iop2Data& data, const ClosedFormSolution& sol,
                    double support_tol = Tolerances{}.support);

// Optimal IOP2 objective by enumerating the sign pattern of c and solving
// one LP per pattern. y <= 0 is implied by the row constraints, so only the
// 2^n_s patterns of c are needed. Throws kSizeLimit above 10 structural
// columns.
double Iop2ObjectiveOracle(const Iop2Data& data,
                           double support_tol = Tolerances{}.support);

// Interior-case objective min{min_i x_i, min_r sigma_r / |a_r|_1}, generic
// over the scalar so exact rationals can be used.
template <typename Scalar>
Scalar Iop2InteriorObjective(const std::vector<std::vector<Scalar>>& a,
                             const std::vector<Scalar>& x_hat,
                             const std::vector<Scalar>& sigma_hat) {
  using std::abs;
  Scalar best = x_hat.front();
  for (const Scalar& v : x_hat) {
    if (v < best) best = v;
  }
  for (size_t r = 0; r < a.size(); ++r) {
    Scalar norm(0);
    for (const Scalar& v : a[r]) norm += abs(v);
    if (norm == Scalar(0)) continue;
    const Scalar ratio = sigma_hat[r] / norm;
    if (ratio < best) best = ratio;
  }
  return best;
}

}  // namespace invopt

#endif  // INVOPT_CLOSED_FORM_H_
