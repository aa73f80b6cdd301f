#ifndef INVOPT_MILP_H_
#define INVOPT_MILP_H_

#include <cstdint>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "invopt/lp.h"

namespace invopt {

struct MilpLimits {
  int64_t node_limit = 1'000'000;
  double time_limit_seconds = kInfinity;
  double integrality_tol = 1e-6;
};

enum class MilpStatus { kOptimal, kFeasible, kInfeasible, kLimit, kUnbounded };
std::string_view MilpStatusName(MilpStatus status);

struct PoolPoint {
  Eigen::VectorXd x;
  double objective = 0.0;
};

struct MilpSolution {
  MilpStatus status = MilpStatus::kInfeasible;
  Eigen::VectorXd x;  // incumbent, empty if none
  double upper_bound = kInfinity;
  double lower_bound = -kInfinity;
  // Every improving incumbent in discovery order (strictly decreasing
  // objective); the last entry is the incumbent.
  std::vector<PoolPoint> pool;
  int64_t node_count = 0;
  double wall_time_seconds = 0.0;

  bool has_incumbent() const { return x.size() > 0; }
};

// Depth-first branch and bound over LP relaxations. Branches on the most
// fractional variable (lowest index on ties), down branch first.
MilpSolution SolveMilp(const LpModel& model, const std::vector<bool>& integer,
                       const MilpLimits& limits = {});

// Forward problem min c'x over a standard-form problem with its integrality.
MilpSolution SolveForward(const ForwardProblem& p, const Eigen::VectorXd& cost,
                          const MilpLimits& limits = {});

}  // namespace invopt

#endif  // INVOPT_MILP_H_
