#ifndef INVOPT_CUTTING_PLANE_H_
#define INVOPT_CUTTING_PLANE_H_

// Cutting-plane refinement around the tolerance model.
//
// A probe forward solve under c_ring exits early when x_hat is already
// optimal. Otherwise a bootstrap master at tau_init produces a first cost,
// the capped forward MILP under that cost yields feasible points, and every
// point x_bar becomes a cut (x_hat - x_bar)'c <= 0. tau then restarts at 1
// and follows the alternating schedule while cuts accumulate. The loop stops
// when c_hat'x_hat - lb drops below abs_gap_stop, or on the iteration or
// time cap.

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "invopt/inverse_mio.h"
#include "invopt/model.h"

namespace invopt {

struct CutPlaneConfig {
  double tau_init = 0.01;
  double tau_up = 1.25;
  double tau_down = 0.75;
  double forward_time_cap = 30.0;
  double total_time_cap = 3600.0;
  int max_iters = 1000;
  double abs_gap_stop = 1e-2;
  int64_t forward_node_limit = 1'000'000;
};

// Throws kSchema unless caps are positive and tau_up > 1 > tau_down > 0.
void ValidateConfig(const CutPlaneConfig& cfg);

enum class CutPlaneStatus { kConverged, kIterLimit, kTimeLimit };
std::string_view CutPlaneStatusName(CutPlaneStatus status);

enum class CutPlanePhase { kProbe, kBootstrap, kRefine };
std::string_view CutPlanePhaseName(CutPlanePhase phase);

struct IterationRecord {
  int iteration = 0;       // 1-based over every forward check
  CutPlanePhase phase = CutPlanePhase::kRefine;
  int schedule_k = 0;      // k of the tau schedule, 0 outside refinement
  double tau = 0.0;
  double master_norm = 0.0;
  double c_hat_x_hat = 0.0;
  double forward_upper_bound = 0.0;
  double forward_lower_bound = 0.0;
  double gap = 0.0;
  int cuts = 0;            // pool size after this record
  bool master_infeasible = false;
  double seconds = 0.0;    // since the run started
};

struct CutPlaneState {
  std::vector<Eigen::VectorXd> cut_pool;  // full-length points
  std::vector<IterationRecord> log;
  std::optional<InverseSolution> best;
  double best_gap = 0.0;
};

struct CutPlaneResult {
  InverseSolution solution;
  CutPlaneState state;
  CutPlaneStatus status = CutPlaneStatus::kIterLimit;
  int iterations() const { return static_cast<int>(state.log.size()); }
};

// Appends x_bar (structural or full length) to the pool. Returns false for
// x_bar = x_hat (vacuous) or a point already pooled. Throws kInvalidCut when
// x_bar is not integer feasible.
bool AddOptimalityCut(CutPlaneState& state, const ForwardProblem& p,
                      const Observation& obs, const Eigen::VectorXd& x_bar,
                      const Tolerances& tol = {});

// tau_up * tau_prev for odd k, tau_down * tau_prev for even k.
double TauSchedule(int k, double tau_prev, const CutPlaneConfig& cfg = {});

using IterationSink = std::function<void(const IterationRecord&)>;

CutPlaneResult RunCuttingPlane(const ForwardProblem& p, const Observation& obs,
                               const Eigen::VectorXd& c_ring,
                               const CutPlaneConfig& cfg = {},
                               const IterationSink& sink = nullptr);

}  // namespace invopt

#endif  // INVOPT_CUTTING_PLANE_H_
