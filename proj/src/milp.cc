#include "invopt/milp.h"

#include <chrono>
#include <cmath>

#include "invopt/error.h"

namespace invopt {

std::string_view MilpStatusName(MilpStatus status) {
  switch (status) {
    case MilpStatus::kOptimal: return "optimal";
    case MilpStatus::kFeasible: return "feasible";
    case MilpStatus::kInfeasible: return "infeasible";
    case MilpStatus::kLimit: return "limit";
    case MilpStatus::kUnbounded: return "unbounded";
  }
  return "unknown";
}

namespace {

struct Node {
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;
  double parent_bound;
};

double Elapsed(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                       start)
      .count();
}

}  // namespace

MilpSolution SolveMilp(const LpModel& model, const std::vector<bool>& integer,
                       const MilpLimits& limits) {
  const auto start = std::chrono::steady_clock::now();
  const int n = model.num_vars();
  if (static_cast<int>(integer.size()) != n) {
    throw Error(ErrorCode::kSchema, "integrality mask has wrong length");
  }

  MilpSolution result;
  LpModel node_model = model;
  std::vector<Node> stack;
  stack.push_back({model.lower, model.upper, -kInfinity});

  auto prune_threshold = [&]() {
    return result.upper_bound -
           1e-9 * (1.0 + std::abs(result.upper_bound));
  };

  bool hit_limit = false;
  while (!stack.empty()) {
    if (result.node_count >= limits.node_limit ||
        Elapsed(start) > limits.time_limit_seconds) {
      hit_limit = true;
      break;
    }
    Node node = std::move(stack.back());
    stack.pop_back();
    if (std::isfinite(result.upper_bound) &&
        node.parent_bound >= prune_threshold()) {
      continue;
    }
    ++result.node_count;

    node_model.lower = node.lower;
    node_model.upper = node.upper;
    const LpSolution lp = SolveLp(node_model);
    if (lp.status == LpStatus::kInfeasible) continue;
    if (lp.status == LpStatus::kUnbounded) {
      // Unbounded relaxation at the root means the MILP is unbounded or
      // infeasible; we report it as unbounded and stop.
      result.status = MilpStatus::kUnbounded;
      result.wall_time_seconds = Elapsed(start);
      return result;
    }
    if (std::isfinite(result.upper_bound) &&
        lp.objective >= prune_threshold()) {
      continue;
    }

    int branch = -1;
    double best_frac = limits.integrality_tol;
    for (int j = 0; j < n; ++j) {
      if (!integer[j]) continue;
      const double frac = std::abs(lp.x(j) - std::round(lp.x(j)));
      // Distance to the nearest integer; 0.5 is the most fractional.
      if (frac > best_frac + 1e-12) {
        best_frac = frac;
        branch = j;
      }
    }

    if (branch < 0) {
      Eigen::VectorXd x = lp.x;
      for (int j = 0; j < n; ++j) {
        if (integer[j]) x(j) = std::round(x(j));
      }
      const double obj = model.objective.dot(x);
      if (!std::isfinite(result.upper_bound) || obj < prune_threshold()) {
        result.upper_bound = obj;
        result.x = x;
        result.pool.push_back({x, obj});
      }
      continue;
    }

    const double value = lp.x(branch);
    Node up{node.lower, node.upper, lp.objective};
    up.lower(branch) = std::ceil(value);
    Node down{std::move(node.lower), std::move(node.upper), lp.objective};
    down.upper(branch) = std::floor(value);
    stack.push_back(std::move(up));
    stack.push_back(std::move(down));
  }

  result.wall_time_seconds = Elapsed(start);
  if (!hit_limit) {
    if (result.has_incumbent()) {
      result.status = MilpStatus::kOptimal;
      result.lower_bound = result.upper_bound;
    } else {
      result.status = MilpStatus::kInfeasible;
      result.lower_bound = kInfinity;
    }
    return result;
  }

  double open_bound = kInfinity;
  for (const Node& node : stack) {
    open_bound = std::min(open_bound, node.parent_bound);
  }
  result.lower_bound = std::min(open_bound, result.upper_bound);
  result.status =
      result.has_incumbent() ? MilpStatus::kFeasible : MilpStatus::kLimit;
  return result;
}

MilpSolution SolveForward(const ForwardProblem& p, const Eigen::VectorXd& cost,
                          const MilpLimits& limits) {
  return SolveMilp(RelaxationModel(p, cost), p.integer, limits);
}

}  // namespace invopt
