#ifndef INVOPT_REPORT_H_
#define INVOPT_REPORT_H_

// Instance-level pipelines behind the CLI commands. Each returns a JSON
// report with floating-point values at 12 significant digits. Identities are
// re-checked before a report is built; a failed check raises
// kCertificateMismatch.

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "invopt/cutting_plane.h"
#include "invopt/error.h"
#include "invopt/instance_io.h"
#include "invopt/inverse_mio.h"
#include "invopt/model.h"

namespace invopt {

// 2 for schema and unsupported input, 3 for a bad observation, 4 otherwise.
int ExitCodeFor(ErrorCode code);

struct PreparedInstance {
  ForwardProblem p;
  Observation obs;
  Eigen::VectorXd c_ring;  // full length
};

PreparedInstance Prepare(const Instance& inst);

enum class WeightMode { kDefault, kUnit, kList };

struct RunOptions {
  ModelKind kind = ModelKind::kTolerance;
  std::optional<double> tau;  // beats config.tau
  WeightMode weight_mode = WeightMode::kDefault;
  std::vector<double> weight_list;  // kList only
  bool scale = false;
  bool timing = true;
  bool oracle = false;  // certify with brute force when enumerable
  std::optional<double> forward_time_cap;
  std::optional<int64_t> node_limit;
};

// Tau used by the tolerance model: explicit, then config, then the default
// ladder on the incumbent of a capped forward solve under c_ring.
double ResolveTau(const Instance& inst, const PreparedInstance& prep,
                  const RunOptions& options);

nlohmann::json SolveReport(const Instance& inst, const RunOptions& options);

nlohmann::json CutPlaneReport(const Instance& inst, const RunOptions& options,
                              const CutPlaneConfig& cfg,
                              const IterationSink& sink = nullptr);

// Evaluates a given structural cost: capped forward bounds, rgap and flags,
// and the oracle verdict when the instance is enumerable.
nlohmann::json VerifyReport(const Instance& inst, const Eigen::VectorXd& cost,
                            const RunOptions& options);

nlohmann::json IterationToJson(const IterationRecord& rec, bool timing);

// Scales c_hat by lambda > 0 and keeps every field consistent.
InverseSolution ScaleSolution(const ForwardProblem& p, const Observation& obs,
                              const Eigen::VectorXd& c_ring,
                              const InverseSolution& sol, double lambda);

}  // namespace invopt

#endif  // INVOPT_REPORT_H_
