#include "invopt/report.h"

#include <algorithm>
#include <cmath>

#include "invopt/milp.h"
#include "invopt/oracle.h"

namespace invopt {

using nlohmann::json;

int ExitCodeFor(ErrorCode code) {
  switch (code) {
    case ErrorCode::kSchema:
    case ErrorCode::kUnsupportedForm:
      return 2;
    case ErrorCode::kObservationInfeasible:
    case ErrorCode::kObservationFractional:
      return 3;
    default:
      return 4;
  }
}

PreparedInstance Prepare(const Instance& inst) {
  PreparedInstance prep;
  prep.p = Standardize(inst.problem);
  prep.obs = AttachObservation(prep.p, inst.observation);
  prep.c_ring = ReferenceCost(prep.p, inst.reference_cost);
  return prep;
}

namespace {

MilpLimits ForwardLimits(const Instance& inst, const RunOptions& options) {
  MilpLimits limits;
  limits.time_limit_seconds =
      options.forward_time_cap.value_or(inst.config.forward_time_cap.value_or(30.0));
  if (auto n = options.node_limit ? options.node_limit : inst.config.node_limit) {
    limits.node_limit = *n;
  }
  return limits;
}

json Structural(const ForwardProblem& p, const Eigen::VectorXd& v) {
  return Sig12Array(v.head(p.structural_count));
}

json Finite(double x) { return std::isfinite(x) ? json(Sig12(x)) : json(nullptr); }

json MetricsJson(const Metrics& m, bool timing) {
  return {{"forward_upper_bound", Finite(m.forward_upper_bound)},
          {"forward_lower_bound", Finite(m.forward_lower_bound)},
          {"c_hat_x_hat", Sig12(m.c_hat_x_hat)},
          {"eps_total", Sig12(m.eps_total)},
          {"l1_deviation", Sig12(m.l1_deviation)},
          {"rgap", Finite(m.rgap)},
          {"rnorm_norm_of_diff", Sig12(m.rnorm_norm_of_diff)},
          {"rnorm_diff_of_norms", Sig12(m.rnorm_diff_of_norms)},
          {"optimal_e2", m.optimal_at_e2},
          {"optimal_e5", m.optimal_at_e5},
          {"cpu_seconds", timing ? Sig12(m.cpu_seconds) : 0.0}};
}

json OracleJson(const ForwardProblem& p, const Observation& obs,
                const Eigen::VectorXd& cost) {
  try {
    const InverseCertificate cert = CertifyInverse(p, obs, cost);
    const double chx = ExpandCost(p, cost).dot(obs.x_hat);
    return {{"status", cert.optimal ? "certified" : "not-optimal"},
            {"forward_value", Sig12(cert.forward_value)},
            {"gap", Sig12(cert.gap)},
            {"rgap", cert.optimal ? 0.0 : Sig12(RelativeGap(chx, cert.forward_value))}};
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kSizeLimit) throw;
    return {{"status", "skipped"}, {"reason", e.what()}};
  }
}

// The checks every report repeats before emission.
json CheckIdentities(const ForwardProblem& p, const Observation& obs,
                     const Eigen::VectorXd& c_ring, const InverseSolution& sol,
                     std::optional<double> tau) {
  const LpCertificate cert = RecoverLpCertificate(p, obs, sol);
  const double split =
      (sol.c_hat - c_ring - sol.f + sol.g).lpNorm<Eigen::Infinity>();
  if (split > 1e-8 * (1.0 + c_ring.lpNorm<Eigen::Infinity>())) {
    throw Error(ErrorCode::kCertificateMismatch,
                "c_hat differs from c_ring + f - g");
  }
  json checks = {{"gap_identity_residual", Sig12(cert.identity_residual)},
                 {"cost_split_residual", Sig12(split)}};
  if (tau) {
    const double slack = *tau * sol.l1_deviation() - sol.eps_total();
    if (slack < -1e-9 * (1.0 + sol.l1_deviation())) {
      throw Error(ErrorCode::kCertificateMismatch,
                  "tolerance bound violated by " + std::to_string(-slack));
    }
    checks["tolerance_slack"] = Sig12(std::max(slack, 0.0));
  }
  return checks;
}

json CertificateJson(const ForwardProblem& p, const LpCertificate& cert) {
  return {{"objective", Sig12(cert.objective)},
          {"x", Structural(p, cert.x)},
          {"identity_residual", Sig12(cert.identity_residual)}};
}

json Header(const Instance& inst, const char* kind) {
  json j;
  j["format"] = kInstanceFormat;
  j["kind"] = kind;
  j["instance"] = inst.name;
  j["group"] = inst.group;
  return j;
}

json SolutionJson(const ForwardProblem& p, const InverseSolution& sol,
                  bool timing) {
  json j;
  j["c_hat"] = Structural(p, sol.c_hat);
  j["l1_deviation"] = Sig12(sol.l1_deviation());
  j["eps_total"] = Sig12(sol.eps_total());
  j["master_objective"] = Sig12(sol.master_objective);
  if (sol.model_kind == ModelKind::kBigM) j["big_m"] = Sig12(sol.big_m);
  j["metrics"] = MetricsJson(sol.metrics, timing);
  if (sol.lp_certificate) {
    j["lp_certificate"] = CertificateJson(p, *sol.lp_certificate);
  }
  return j;
}

Eigen::VectorXd Weights(const PreparedInstance& prep, const Instance& inst,
                        const RunOptions& options) {
  const SupportSets supports = PartitionSupport(prep.obs, prep.p);
  const auto size = static_cast<Eigen::Index>(supports.in.size());
  switch (options.weight_mode) {
    case WeightMode::kUnit:
      return Eigen::VectorXd::Ones(size);
    case WeightMode::kList:
      if (static_cast<Eigen::Index>(options.weight_list.size()) != size) {
        throw Error(ErrorCode::kSchema,
                    "weights need " + std::to_string(size) +
                        " entries, one per positive entry of x_hat");
      }
      return Eigen::Map<const Eigen::VectorXd>(options.weight_list.data(), size);
    case WeightMode::kDefault:
      break;
  }
  if (inst.config.weights) {
    RunOptions listed = options;
    listed.weight_mode = WeightMode::kList;
    listed.weight_list = *inst.config.weights;
    return Weights(prep, inst, listed);
  }
  return DefaultWeights(prep.obs, supports);
}

json WeightsJson(const RunOptions& options, const Instance& inst,
                 const Eigen::VectorXd& w) {
  if (options.weight_mode == WeightMode::kUnit) return "unit";
  if (options.weight_mode == WeightMode::kDefault && !inst.config.weights) {
    return "default";
  }
  return Sig12Array(w);
}

}  // namespace

double ResolveTau(const Instance& inst, const PreparedInstance& prep,
                  const RunOptions& options) {
  if (options.tau) return *options.tau;
  if (inst.config.tau) return *inst.config.tau;
  MilpLimits limits = ForwardLimits(inst, options);
  const MilpSolution fwd = SolveForward(prep.p, prep.c_ring, limits);
  const double reference = fwd.has_incumbent()
                               ? fwd.upper_bound
                               : prep.c_ring.dot(prep.obs.x_hat);
  return DefaultTau(reference);
}

InverseSolution ScaleSolution(const ForwardProblem& p, const Observation& obs,
                              const Eigen::VectorXd& c_ring,
                              const InverseSolution& sol, double lambda) {
  InverseSolution out = sol;
  out.c_hat = lambda * sol.c_hat;
  out.eps = lambda * sol.eps;
  out.s = lambda * sol.s;
  out.y = lambda * sol.y;
  const Eigen::VectorXd d = out.c_hat - c_ring;
  out.f = Eigen::VectorXd::Zero(p.num_cols());
  out.g = Eigen::VectorXd::Zero(p.num_cols());
  for (int j = 0; j < p.structural_count; ++j) {
    out.f(j) = std::max(d(j), 0.0);
    out.g(j) = std::max(-d(j), 0.0);
  }
  out.lp_certificate = RecoverLpCertificate(p, obs, out);
  return out;
}

json SolveReport(const Instance& inst, const RunOptions& options) {
  const PreparedInstance prep = Prepare(inst);
  const ForwardProblem& p = prep.p;
  ModelOptions mo;
  mo.kind = options.kind;
  mo.milp_limits = ForwardLimits(inst, options);
  if (inst.config.big_m) mo.big_m = *inst.config.big_m;
  std::optional<double> tau;
  if (options.kind == ModelKind::kTolerance) {
    tau = ResolveTau(inst, prep, options);
    mo.tau = tau;
  }
  Eigen::VectorXd weights;
  if (options.kind == ModelKind::kBiobjective) {
    weights = Weights(prep, inst, options);
    mo.weights = weights;
  }

  InverseSolution sol = SolveInverse(p, prep.obs, prep.c_ring, mo);
  json j = Header(inst, "solve");
  j["model"] = ModelKindName(options.kind);
  if (tau) j["tau"] = Sig12(*tau);
  if (options.kind == ModelKind::kBiobjective) {
    j["weights"] = WeightsJson(options, inst, weights);
  }
  j["checks"] = CheckIdentities(p, prep.obs, prep.c_ring, sol, tau);
  if (options.scale) {
    const ScaledCost scaled = ScaleCost(p, sol.c_hat, prep.c_ring);
    const double seconds = sol.solve_seconds;
    sol = ScaleSolution(p, prep.obs, prep.c_ring, sol, scaled.lambda);
    sol.solve_seconds = seconds;
    j["scale_lambda"] = Sig12(scaled.lambda);
    // The tolerance bound is not scale invariant; only the identity carries
    // over.
    j["scaled_checks"] =
        CheckIdentities(p, prep.obs, prep.c_ring, sol, std::nullopt);
  }
  j["scaled"] = options.scale;
  EvaluateSolution(p, prep.obs, prep.c_ring, sol, mo.milp_limits);
  j.update(SolutionJson(p, sol, options.timing));
  if (options.oracle) j["oracle"] = OracleJson(p, prep.obs, sol.c_hat);
  return j;
}

json IterationToJson(const IterationRecord& rec, bool timing) {
  return {{"iteration", rec.iteration},
          {"phase", CutPlanePhaseName(rec.phase)},
          {"k", rec.schedule_k},
          {"tau", Sig12(rec.tau)},
          {"master_infeasible", rec.master_infeasible},
          {"master_norm", Sig12(rec.master_norm)},
          {"c_hat_x_hat", Sig12(rec.c_hat_x_hat)},
          {"forward_upper_bound", Finite(rec.forward_upper_bound)},
          {"forward_lower_bound", Finite(rec.forward_lower_bound)},
          {"gap", Finite(rec.gap)},
          {"cuts", rec.cuts},
          {"seconds", timing ? Sig12(rec.seconds) : 0.0}};
}

json CutPlaneReport(const Instance& inst, const RunOptions& options,
                    const CutPlaneConfig& cfg, const IterationSink& sink) {
  const PreparedInstance prep = Prepare(inst);
  const ForwardProblem& p = prep.p;
  CutPlaneResult r = RunCuttingPlane(p, prep.obs, prep.c_ring, cfg, sink);
  json j = Header(inst, "cutplane");
  j["model"] = "cutplane";
  j["status"] = CutPlaneStatusName(r.status);
  j["iterations"] = r.iterations();
  j["cuts"] = r.state.cut_pool.size();
  j["checks"] = CheckIdentities(p, prep.obs, prep.c_ring, r.solution,
                                std::nullopt);
  MilpLimits limits;
  limits.time_limit_seconds = cfg.forward_time_cap;
  limits.node_limit = cfg.forward_node_limit;
  EvaluateSolution(p, prep.obs, prep.c_ring, r.solution, limits);
  j.update(SolutionJson(p, r.solution, options.timing));
  json log = json::array();
  for (const IterationRecord& rec : r.state.log) {
    log.push_back(IterationToJson(rec, options.timing));
  }
  j["log"] = log;
  if (options.oracle) j["oracle"] = OracleJson(p, prep.obs, r.solution.c_hat);
  return j;
}

json VerifyReport(const Instance& inst, const Eigen::VectorXd& cost,
                  const RunOptions& options) {
  const PreparedInstance prep = Prepare(inst);
  const ForwardProblem& p = prep.p;
  const Eigen::VectorXd c = ReferenceCost(p, cost);
  const MilpSolution fwd = SolveForward(p, c, ForwardLimits(inst, options));
  const double ub = fwd.has_incumbent() ? fwd.upper_bound : kInfinity;
  Metrics m = ComputeMetrics(c, prep.c_ring, prep.obs, 0.0, ub, fwd.lower_bound);
  json j = Header(inst, "verify");
  j["cost"] = Structural(p, c);
  j["forward_status"] = MilpStatusName(fwd.status);
  j["forward_nodes"] = fwd.node_count;
  j["forward_upper_bound"] = Finite(ub);
  j["forward_lower_bound"] = Finite(fwd.lower_bound);
  j["c_hat_x_hat"] = Sig12(m.c_hat_x_hat);
  j["rgap"] = Finite(m.rgap);
  j["optimal_e2"] = m.optimal_at_e2;
  j["optimal_e5"] = m.optimal_at_e5;
  j["l1_deviation"] = Sig12(m.l1_deviation);
  j["oracle"] = OracleJson(p, prep.obs, c);
  return j;
}

}  // namespace invopt
