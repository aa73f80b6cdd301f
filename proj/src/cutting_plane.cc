#include "invopt/cutting_plane.h"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "invopt/error.h"
#include "invopt/milp.h"

namespace invopt {

std::string_view CutPlaneStatusName(CutPlaneStatus status) {
  switch (status) {
    case CutPlaneStatus::kConverged: return "converged";
    case CutPlaneStatus::kIterLimit: return "iter-limit";
    case CutPlaneStatus::kTimeLimit: return "time-limit";
  }
  return "unknown";
}

std::string_view CutPlanePhaseName(CutPlanePhase phase) {
  switch (phase) {
    case CutPlanePhase::kProbe: return "probe";
    case CutPlanePhase::kBootstrap: return "bootstrap";
    case CutPlanePhase::kRefine: return "refine";
  }
  return "unknown";
}

void ValidateConfig(const CutPlaneConfig& cfg) {
  if (!(cfg.tau_init > 0) || !(cfg.forward_time_cap > 0) ||
      !(cfg.total_time_cap > 0) || !(cfg.abs_gap_stop > 0) ||
      cfg.max_iters < 0 || cfg.forward_node_limit <= 0) {
    throw Error(ErrorCode::kSchema, "cutting-plane caps must be positive");
  }
  if (!(cfg.tau_up > 1.0) || !(cfg.tau_down > 0.0 && cfg.tau_down < 1.0)) {
    throw Error(ErrorCode::kSchema, "need tau_up > 1 > tau_down > 0");
  }
}

bool AddOptimalityCut(CutPlaneState& state, const ForwardProblem& p,
                      const Observation& obs, const Eigen::VectorXd& x_bar,
                      const Tolerances& tol) {
  Eigen::VectorXd x = x_bar.size() == p.structural_count
                          ? CompletePoint(p, x_bar)
                          : x_bar;
  if (x.size() != p.num_cols()) {
    throw Error(ErrorCode::kInvalidCut, "cut point has wrong length");
  }
  const double residual = (p.A * x - p.b).lpNorm<Eigen::Infinity>();
  if (residual > tol.feasibility * (1.0 + p.b.lpNorm<Eigen::Infinity>()) ||
      x.minCoeff() < -tol.feasibility) {
    throw Error(ErrorCode::kInvalidCut, "cut point is infeasible");
  }
  for (int j = 0; j < p.num_cols(); ++j) {
    if (p.integer[j] && std::abs(x(j) - std::round(x(j))) > tol.integrality) {
      throw Error(ErrorCode::kInvalidCut, "cut point is fractional", j);
    }
  }
  auto same = [](const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    return (a - b).lpNorm<Eigen::Infinity>() <= 1e-9;
  };
  if (same(x, obs.x_hat)) return false;
  for (const Eigen::VectorXd& pooled : state.cut_pool) {
    if (same(x, pooled)) return false;
  }
  state.cut_pool.push_back(std::move(x));
  return true;
}

double TauSchedule(int k, double tau_prev, const CutPlaneConfig& cfg) {
  return (k % 2 == 1 ? cfg.tau_up : cfg.tau_down) * tau_prev;
}

namespace {

class Runner {
 public:
  Runner(const ForwardProblem& p, const Observation& obs,
         const Eigen::VectorXd& c_ring, const CutPlaneConfig& cfg,
         const IterationSink& sink)
      : p_(p),
        obs_(obs),
        c_ring_(ReferenceCost(p, c_ring.head(p.structural_count))),
        cfg_(cfg),
        sink_(sink),
        start_(std::chrono::steady_clock::now()) {}

  CutPlaneResult Run() {
    // Probe: is x_hat already optimal under c_ring?
    {
      const MilpSolution fwd = Forward(c_ring_);
      const double gap = Gap(c_ring_, fwd);
      Record(CutPlanePhase::kProbe, 0, 0.0, 0.0, c_ring_, fwd, gap, false);
      if (gap < cfg_.abs_gap_stop) {
        InverseSolution sol = SolveConciseModel(p_, obs_, c_ring_);
        Consider(sol, gap);
        return Finish(CutPlaneStatus::kConverged);
      }
    }

    // Bootstrap master and its cuts.
    {
      InverseSolution sol =
          SolveToleranceModel(p_, obs_, c_ring_, cfg_.tau_init);
      const MilpSolution fwd = Forward(sol.c_hat);
      Harvest(fwd);
      const double gap = Gap(sol.c_hat, fwd);
      Record(CutPlanePhase::kBootstrap, 0, cfg_.tau_init, sol.l1_deviation(),
             sol.c_hat, fwd, gap, false);
      Consider(sol, gap);
      if (gap < cfg_.abs_gap_stop) return Finish(CutPlaneStatus::kConverged);
    }

    double tau = 1.0;
    for (int k = 1; k <= cfg_.max_iters; ++k) {
      if (Elapsed() >= cfg_.total_time_cap) {
        return Finish(CutPlaneStatus::kTimeLimit);
      }
      tau = TauSchedule(k, tau, cfg_);
      InverseSolution sol;
      try {
        sol = SolveToleranceModel(p_, obs_, c_ring_, tau, state_.cut_pool);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::kToleranceInfeasible) throw;
        IterationRecord rec;
        rec.master_infeasible = true;
        Push(rec, CutPlanePhase::kRefine, k, tau);
        tau *= 4.0;
        continue;
      }
      const MilpSolution fwd = Forward(sol.c_hat);
      Harvest(fwd);
      const double gap = Gap(sol.c_hat, fwd);
      Record(CutPlanePhase::kRefine, k, tau, sol.l1_deviation(), sol.c_hat,
             fwd, gap, false);
      Consider(sol, gap);
      if (gap < cfg_.abs_gap_stop) return Finish(CutPlaneStatus::kConverged);
    }
    return Finish(Elapsed() >= cfg_.total_time_cap ? CutPlaneStatus::kTimeLimit
                                                   : CutPlaneStatus::kIterLimit);
  }

 private:
  double Elapsed() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start_)
        .count();
  }

  MilpSolution Forward(const Eigen::VectorXd& c) {
    MilpLimits limits;
    limits.node_limit = cfg_.forward_node_limit;
    limits.time_limit_seconds = std::max(
        0.0, std::min(cfg_.forward_time_cap, cfg_.total_time_cap - Elapsed()));
    return SolveForward(p_, c, limits);
  }

  double Gap(const Eigen::VectorXd& c, const MilpSolution& fwd) const {
    if (!std::isfinite(fwd.lower_bound)) return kInfinity;
    return c.dot(obs_.x_hat) - fwd.lower_bound;
  }

  void Harvest(const MilpSolution& fwd) {
    for (const PoolPoint& point : fwd.pool) {
      AddOptimalityCut(state_, p_, obs_, point.x);
    }
  }

  void Consider(InverseSolution& sol, double gap) {
    const bool better =
        !state_.best || gap < state_.best_gap - 1e-12 ||
        (gap <= state_.best_gap + 1e-12 &&
         sol.l1_deviation() < state_.best->l1_deviation() - 1e-12);
    if (better) {
      state_.best = sol;
      state_.best_gap = gap;
    }
  }

  void Record(CutPlanePhase phase, int k, double tau, double norm,
              const Eigen::VectorXd& c, const MilpSolution& fwd, double gap,
              bool infeasible) {
    IterationRecord rec;
    rec.master_norm = norm;
    rec.c_hat_x_hat = c.dot(obs_.x_hat);
    rec.forward_upper_bound = fwd.has_incumbent() ? fwd.upper_bound : kInfinity;
    rec.forward_lower_bound = fwd.lower_bound;
    rec.gap = gap;
    rec.master_infeasible = infeasible;
    Push(rec, phase, k, tau);
  }

  void Push(IterationRecord rec, CutPlanePhase phase, int k, double tau) {
    rec.iteration = static_cast<int>(state_.log.size()) + 1;
    rec.phase = phase;
    rec.schedule_k = k;
    rec.tau = tau;
    rec.cuts = static_cast<int>(state_.cut_pool.size());
    rec.seconds = Elapsed();
    state_.log.push_back(rec);
    if (sink_) sink_(rec);
  }

  CutPlaneResult Finish(CutPlaneStatus status) {
    CutPlaneResult result;
    result.status = status;
    if (!state_.best) {
      // Time ran out before any master solve.
      state_.best = SolveConciseModel(p_, obs_, c_ring_);
      state_.best_gap = kInfinity;
    }
    result.solution = *state_.best;
    result.solution.solve_seconds = Elapsed();
    result.state = std::move(state_);
    return result;
  }

  const ForwardProblem& p_;
  const Observation& obs_;
  Eigen::VectorXd c_ring_;
  CutPlaneConfig cfg_;
  IterationSink sink_;
  std::chrono::steady_clock::time_point start_;
  CutPlaneState state_;
};

}  // namespace

CutPlaneResult RunCuttingPlane(const ForwardProblem& p, const Observation& obs,
                               const Eigen::VectorXd& c_ring,
                               const CutPlaneConfig& cfg,
                               const IterationSink& sink) {
  ValidateConfig(cfg);
  return Runner(p, obs, c_ring, cfg, sink).Run();
}

}  // namespace invopt
