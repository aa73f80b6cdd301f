#ifndef INVOPT_ORACLE_H_
#define INVOPT_ORACLE_H_

// Brute-force ground truth for small instances. Nothing here touches the
// branch-and-bound engine: integer points come from exhaustive lattice
// enumeration inside a box derived by interval bound propagation. Mixed
// problems profile their continuous variables with one LP per lattice point.

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "invopt/model.h"

namespace invopt {

inline constexpr int64_t kDefaultBoxLimit = 1'000'000;

struct VariableBox {
  Eigen::VectorXd lower;  // structural variables
  Eigen::VectorXd upper;  // may hold +inf
  bool empty = false;
};

// Interval propagation over the rows of the structural block.
VariableBox PropagateBounds(const ForwardProblem& p);

// Full standard-form vectors of every integer-feasible point, ordered
// lexicographically by structural values. Throws kSizeLimit if the derived
// box is unbounded or holds more than `box_limit` lattice points.
std::vector<Eigen::VectorXd> EnumerateIntegerPoints(
    const ForwardProblem& p, int64_t box_limit = kDefaultBoxLimit);

struct ForwardOracleResult {
  double value = 0.0;  // +inf when infeasible
  std::vector<Eigen::VectorXd> argmin;
};

// `cost` may be structural or full length.
ForwardOracleResult BruteForceForward(const ForwardProblem& p,
                                      const Eigen::VectorXd& cost,
                                      int64_t box_limit = kDefaultBoxLimit);

struct InverseCertificate {
  bool optimal = false;
  double gap = 0.0;  // c'x_hat - min, zero when optimal
  double forward_value = 0.0;
};

InverseCertificate CertifyInverse(const ForwardProblem& p,
                                  const Observation& obs,
                                  const Eigen::VectorXd& cost,
                                  double tol = 1e-9,
                                  int64_t box_limit = kDefaultBoxLimit);

// Vertices of the LP relaxation of a two-variable problem, found by
// intersecting every pair of boundary lines (rows and the two axes).
std::vector<Eigen::Vector2d> EnumerateVertices2d(const ForwardProblem& p);

// min c'x over the two-variable relaxation by vertex evaluation. Assumes the
// relaxation is bounded.
double VertexMinimum2d(const ForwardProblem& p, const Eigen::Vector2d& cost);

}  // namespace invopt

#endif  // INVOPT_ORACLE_H_
