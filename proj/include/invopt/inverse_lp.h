#ifndef INVOPT_INVERSE_LP_H_
#define INVOPT_INVERSE_LP_H_

// Inverse linear optimization: the reduced-cost basis model, the
// complementarity model for boundary points, and the min-gap LP for strictly
// interior points.
//
// Costs are full standard-form vectors. As in the mixed-integer models, slack
// entries of the returned cost stay at their reference value (zero); only
// structural entries move, through the split c = c_ring + f - g.

#include <vector>

#include <Eigen/Dense>

#include "invopt/model.h"

namespace invopt {

struct InverseLpResult {
  Eigen::VectorXd c_hat;
  Eigen::VectorXd y;
  double l1_deviation = 0.0;
  std::vector<int> basis;  // filled by the basis model only
};

// Throws kNotExtreme if the columns with x_hat > 0 are linearly dependent,
// kDegenerateBasis if no completion to an invertible basis exists.
InverseLpResult InverseLpBasis(const ForwardProblem& p, const Observation& obs,
                               const Eigen::VectorXd& c_ring,
                               double support_tol = Tolerances{}.support);

InverseLpResult InverseLpComplementarity(
    const ForwardProblem& p, const Observation& obs,
    const Eigen::VectorXd& c_ring, double support_tol = Tolerances{}.support);

struct MinGapResult {
  Eigen::VectorXd y;
  Eigen::VectorXd eps;
  Eigen::VectorXd s;  // eps / x_hat
  double gap = 0.0;
};

// min e'eps s.t. A'y + X^{-1} eps = c, eps >= 0. Throws kNotInterior when
// some x_hat_i <= support_tol.
MinGapResult MinGapLp(const ForwardProblem& p, const Observation& obs,
                      const Eigen::VectorXd& cost,
                      double support_tol = Tolerances{}.support);

}  // namespace invopt

#endif  // INVOPT_INVERSE_LP_H_
