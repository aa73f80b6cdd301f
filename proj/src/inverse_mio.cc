#include "invopt/inverse_mio.h"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "invopt/error.h"

namespace invopt {

std::string_view ModelKindName(ModelKind kind) {
  switch (kind) {
    case ModelKind::kTolerance: return "tolerance";
    case ModelKind::kBiobjective: return "biobj";
    case ModelKind::kBigM: return "bigm";
    case ModelKind::kConcise: return "concise";
  }
  return "unknown";
}

std::optional<ModelKind> ParseModelKind(std::string_view name) {
  if (name == "tolerance") return ModelKind::kTolerance;
  if (name == "biobj") return ModelKind::kBiobjective;
  if (name == "bigm") return ModelKind::kBigM;
  if (name == "concise") return ModelKind::kConcise;
  return std::nullopt;
}

namespace {

constexpr int kBigMRetries = 3;

double Seconds(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                       start)
      .count();
}

// Support and off-support rows, plus the gap row when asked, over `extra` trailing variables
// reserved for the caller.
ConciseLp BuildCore(const ForwardProblem& p, const Observation& obs,
                    const SupportSets& supports, const Eigen::VectorXd& c_ring,
                    int extra, bool with_gap_row) {
  const int m = p.num_rows();
  const int n = p.num_cols();
  const Eigen::VectorXd c0 = ExpandCost(p, c_ring);
  ConciseLp lp;
  lp.supports = supports;
  ConciseLayout& lay = lp.layout;
  lay.m = m;
  lay.n = n;
  lay.eps.assign(n, -1);
  lay.s.assign(n, -1);
  lay.f.assign(n, -1);
  lay.g.assign(n, -1);
  int next = m;
  for (int i : supports.in) {
    if (obs.x_hat(i) <= 0.0) {
      throw Error(ErrorCode::kInternal,
                  "support index with nonpositive observation", i);
    }
    lay.eps[i] = next++;
  }
  for (int i : supports.out) lay.s[i] = next++;
  for (int j = 0; j < p.structural_count; ++j) {
    lay.f[j] = next++;
    lay.g[j] = next++;
  }
  lay.num_vars = next;

  LpModel& model = lp.model;
  model = LpModel(next + extra);
  for (int r = 0; r < m; ++r) model.SetFree(r);
  for (int j = 0; j < p.structural_count; ++j) {
    model.objective(lay.f[j]) = 1.0;
    model.objective(lay.g[j]) = 1.0;
  }
  for (int i = 0; i < n; ++i) {
    Eigen::VectorXd row = Eigen::VectorXd::Zero(next + extra);
    row.head(m) = p.A.col(i);
    if (lay.eps[i] >= 0) {
      row(lay.eps[i]) = 1.0 / obs.x_hat(i);
    } else {
      row(lay.s[i]) = 1.0;
    }
    if (lay.f[i] >= 0) {
      row(lay.f[i]) = -1.0;
      row(lay.g[i]) = 1.0;
    }
    model.AddRow(std::move(row), Relation::kEqual, c0(i));
  }
  if (with_gap_row) {
    Eigen::VectorXd row = Eigen::VectorXd::Zero(next + extra);
    row.head(m) = p.b;
    for (int i : supports.in) row(lay.eps[i]) = 1.0;
    for (int j = 0; j < p.structural_count; ++j) {
      row(lay.f[j]) = -obs.x_hat(j);
      row(lay.g[j]) = obs.x_hat(j);
    }
    model.AddRow(std::move(row), Relation::kEqual, c0.dot(obs.x_hat));
  }
  return lp;
}

void SplitDeviation(const Eigen::VectorXd& c_hat, const Eigen::VectorXd& c0,
                    InverseSolution& sol) {
  const Eigen::VectorXd d = c_hat - c0;
  sol.f = d.cwiseMax(0.0);
  sol.g = (-d).cwiseMax(0.0);
}

// Fills c_hat, f, g, y, eps, s from a solved concise-layout vector.
void ReadLayout(const ConciseLayout& lay, const Eigen::VectorXd& c0,
                const Eigen::VectorXd& x, InverseSolution& sol) {
  sol.c_hat = Eigen::VectorXd::Zero(lay.n);
  sol.eps = Eigen::VectorXd::Zero(lay.n);
  sol.s = Eigen::VectorXd::Zero(lay.n);
  for (int i = 0; i < lay.n; ++i) {
    if (lay.f[i] >= 0) sol.c_hat(i) = c0(i) + x(lay.f[i]) - x(lay.g[i]);
    if (lay.eps[i] >= 0) sol.eps(i) = std::max(0.0, x(lay.eps[i]));
    if (lay.s[i] >= 0) sol.s(i) = std::max(0.0, x(lay.s[i]));
  }
  sol.y = x.head(lay.m);
  SplitDeviation(sol.c_hat, c0, sol);
}

// Smallest gap for a fixed cost: min e'eps over the support and off-support rows with c fixed.
void MinimizeGap(const ForwardProblem& p, const Observation& obs,
                 const SupportSets& supports, InverseSolution& sol) {
  const int m = p.num_rows();
  const int n = p.num_cols();
  std::vector<int> col_var(n);
  int next = m;
  for (int i : supports.in) col_var[i] = next++;
  for (int i : supports.out) col_var[i] = next++;
  LpModel model(next);
  for (int r = 0; r < m; ++r) model.SetFree(r);
  std::vector<bool> on_support(n, false);
  for (int i : supports.in) {
    on_support[i] = true;
    model.objective(col_var[i]) = 1.0;
  }
  for (int i = 0; i < n; ++i) {
    Eigen::VectorXd row = Eigen::VectorXd::Zero(next);
    row.head(m) = p.A.col(i);
    row(col_var[i]) = on_support[i] ? 1.0 / obs.x_hat(i) : 1.0;
    model.AddRow(std::move(row), Relation::kEqual, sol.c_hat(i));
  }
  const LpSolution lp = SolveLp(model);
  if (lp.status != LpStatus::kOptimal) {
    throw Error(ErrorCode::kNumericalFailure,
                "gap LP for the recovered cost did not solve");
  }
  sol.y = lp.x.head(m);
  sol.eps.setZero();
  sol.s.setZero();
  for (int i = 0; i < n; ++i) {
    const double v = std::max(0.0, lp.x(col_var[i]));
    if (on_support[i]) {
      sol.eps(i) = v;
    } else {
      sol.s(i) = v;
    }
  }
}

void ValidateWeights(const Eigen::VectorXd& w, const SupportSets& supports) {
  if (w.size() != static_cast<Eigen::Index>(supports.in.size())) {
    throw Error(ErrorCode::kSchema,
                "weights need one entry per positive observation entry (" +
                    std::to_string(supports.in.size()) + ")");
  }
  for (int k = 0; k < w.size(); ++k) {
    if (!(w(k) > 0.0) || !std::isfinite(w(k))) {
      throw Error(ErrorCode::kSchema, "weights must be positive and finite",
                  k);
    }
  }
}

InverseSolution SolveLpModel(const ForwardProblem& p, const Observation& obs,
                             const SupportSets& supports,
                             const Eigen::VectorXd& c0,
                             const ModelOptions& options) {
  ConciseLp lp = BuildConciseLp(p, obs, supports, c0);
  if (options.tau) AddToleranceRow(lp, *options.tau);
  if (options.kind == ModelKind::kBiobjective) {
    const Eigen::VectorXd w =
        options.weights ? *options.weights : DefaultWeights(obs, supports);
    AddEpsilonWeights(lp, w);
  }
  for (const Eigen::VectorXd& x_bar : options.cuts) {
    AddOptimalityCutRow(lp, obs.x_hat, x_bar, c0);
  }
  const LpSolution result = SolveLp(lp.model);
  if (result.status == LpStatus::kInfeasible) {
    throw Error(ErrorCode::kToleranceInfeasible,
                "inverse LP is infeasible at the requested tolerance");
  }
  if (result.status != LpStatus::kOptimal) {
    throw Error(ErrorCode::kNumericalFailure, "inverse LP is unbounded");
  }
  InverseSolution sol;
  sol.model_kind = options.kind;
  sol.master_objective = result.objective;
  ReadLayout(lp.layout, c0, result.x, sol);
  MinimizeGap(p, obs, supports, sol);
  return sol;
}

struct BigMAttempt {
  bool ok = false;
  InverseSolution sol;
};

BigMAttempt SolveBigMOnce(const ForwardProblem& p, const Observation& obs,
                          const SupportSets& supports,
                          const Eigen::VectorXd& c0,
                          const ModelOptions& options, double big_m) {
  const int n = p.num_cols();
  ConciseLp lp = BuildCore(p, obs, supports, c0, 2 * n, false);
  const ConciseLayout& lay = lp.layout;
  LpModel& model = lp.model;
  const int total = model.num_vars();
  auto delta = [&](int i) { return lay.num_vars + i; };
  auto z = [&](int i) { return lay.num_vars + n + i; };

  if (options.tau) AddToleranceRow(lp, *options.tau);
  if (options.weights) AddEpsilonWeights(lp, *options.weights);
  for (const Eigen::VectorXd& x_bar : options.cuts) {
    AddOptimalityCutRow(lp, obs.x_hat, x_bar, c0);
  }

  for (int r = 0; r < p.num_rows(); ++r) {
    Eigen::VectorXd row = Eigen::VectorXd::Zero(total);
    for (int i = 0; i < n; ++i) row(delta(i)) = p.A(r, i);
    model.AddRow(std::move(row), Relation::kEqual, 0.0);
  }
  std::vector<bool> integer(total, false);
  for (int i = 0; i < n; ++i) {
    model.lower(delta(i)) = -big_m;
    model.upper(delta(i)) = obs.x_hat(i);
    model.upper(z(i)) = 1.0;
    integer[z(i)] = true;
    Eigen::VectorXd link = Eigen::VectorXd::Zero(total);
    link(delta(i)) = 1.0;
    link(z(i)) = big_m;
    Eigen::VectorXd cap = Eigen::VectorXd::Zero(total);
    cap(z(i)) = big_m;
    if (lay.eps[i] >= 0) {
      model.AddRow(std::move(link), Relation::kGreaterEqual, obs.x_hat(i));
      cap(lay.eps[i]) = 1.0;
    } else {
      model.AddRow(std::move(link), Relation::kGreaterEqual, 0.0);
      cap(lay.s[i]) = 1.0;
    }
    model.AddRow(std::move(cap), Relation::kLessEqual, big_m);
  }

  const MilpSolution milp = SolveMilp(model, integer, options.milp_limits);
  BigMAttempt attempt;
  if (milp.status == MilpStatus::kUnbounded) {
    throw Error(ErrorCode::kNumericalFailure, "big-M model is unbounded");
  }
  if (!milp.has_incumbent()) return attempt;

  InverseSolution& sol = attempt.sol;
  sol.model_kind = ModelKind::kBigM;
  sol.big_m = big_m;
  sol.master_objective = milp.upper_bound;
  ReadLayout(lay, c0, milp.x, sol);
  sol.delta = Eigen::VectorXd(n);
  for (int i = 0; i < n; ++i) sol.delta(i) = milp.x(delta(i));

  const double near_cap = big_m * (1.0 - 1e-6);
  for (int i = 0; i < n; ++i) {
    if (sol.eps(i) >= near_cap || sol.s(i) >= near_cap ||
        sol.delta(i) <= -near_cap) {
      return attempt;
    }
  }
  attempt.ok = true;
  return attempt;
}

}  // namespace

ConciseLp BuildConciseLp(const ForwardProblem& p, const Observation& obs,
                         const SupportSets& supports,
                         const Eigen::VectorXd& c_ring) {
  return BuildCore(p, obs, supports, c_ring, 0, true);
}

void AddToleranceRow(ConciseLp& lp, double tau) {
  if (!(tau > 0.0)) {
    throw Error(ErrorCode::kSchema, "tau must be positive");
  }
  const ConciseLayout& lay = lp.layout;
  Eigen::VectorXd row = Eigen::VectorXd::Zero(lp.model.num_vars());
  for (int i = 0; i < lay.n; ++i) {
    if (lay.eps[i] >= 0) row(lay.eps[i]) = 1.0;
    if (lay.f[i] >= 0) {
      row(lay.f[i]) = -tau;
      row(lay.g[i]) = -tau;
    }
  }
  lp.model.AddRow(std::move(row), Relation::kLessEqual, 0.0);
}

void AddEpsilonWeights(ConciseLp& lp, const Eigen::VectorXd& weights) {
  ValidateWeights(weights, lp.supports);
  for (size_t k = 0; k < lp.supports.in.size(); ++k) {
    lp.model.objective(lp.layout.eps[lp.supports.in[k]]) = weights(k);
  }
}

void AddOptimalityCutRow(ConciseLp& lp, const Eigen::VectorXd& x_hat,
                         const Eigen::VectorXd& x_bar,
                         const Eigen::VectorXd& c_ring) {
  const ConciseLayout& lay = lp.layout;
  if (x_bar.size() != lay.n) {
    throw Error(ErrorCode::kInvalidCut, "cut point has wrong length");
  }
  const Eigen::VectorXd d = x_hat - x_bar;
  Eigen::VectorXd row = Eigen::VectorXd::Zero(lp.model.num_vars());
  double rhs = 0.0;
  for (int j = 0; j < lay.n; ++j) {
    if (lay.f[j] < 0) continue;
    row(lay.f[j]) = d(j);
    row(lay.g[j]) = -d(j);
    rhs -= d(j) * c_ring(j);
  }
  lp.model.AddRow(std::move(row), Relation::kLessEqual, rhs);
}

InverseSolution SolveInverse(const ForwardProblem& p, const Observation& obs,
                             const Eigen::VectorXd& c_ring,
                             const ModelOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  const Eigen::VectorXd c0 = ReferenceCost(p, c_ring.head(p.structural_count));
  const SupportSets supports = PartitionSupport(obs, p, options.support_tol);

  InverseSolution sol;
  switch (options.kind) {
    case ModelKind::kTolerance:
      if (!options.tau) {
        throw Error(ErrorCode::kSchema, "tolerance model needs tau");
      }
      sol = SolveLpModel(p, obs, supports, c0, options);
      break;
    case ModelKind::kBiobjective:
    case ModelKind::kConcise:
      sol = SolveLpModel(p, obs, supports, c0, options);
      break;
    case ModelKind::kBigM: {
      double big_m = options.big_m ? *options.big_m : DefaultBigM(p, obs, c0);
      if (!(big_m > 0.0)) {
        throw Error(ErrorCode::kSchema, "big-M must be positive");
      }
      BigMAttempt attempt;
      for (int k = 0; k <= kBigMRetries; ++k) {
        attempt = SolveBigMOnce(p, obs, supports, c0, options, big_m);
        if (attempt.ok) break;
        big_m *= 10.0;
      }
      if (!attempt.ok) {
        throw Error(ErrorCode::kBigMTooSmall,
                    "big-M bound still active after retries");
      }
      sol = std::move(attempt.sol);
      break;
    }
  }
  sol.lp_certificate = RecoverLpCertificate(p, obs, sol);
  sol.solve_seconds = Seconds(start);
  return sol;
}

InverseSolution SolveConciseModel(const ForwardProblem& p,
                                  const Observation& obs,
                                  const Eigen::VectorXd& c_ring) {
  ModelOptions options;
  options.kind = ModelKind::kConcise;
  return SolveInverse(p, obs, c_ring, options);
}

InverseSolution SolveToleranceModel(const ForwardProblem& p,
                                    const Observation& obs,
                                    const Eigen::VectorXd& c_ring, double tau,
                                    const std::vector<Eigen::VectorXd>& cuts) {
  ModelOptions options;
  options.kind = ModelKind::kTolerance;
  options.tau = tau;
  options.cuts = cuts;
  return SolveInverse(p, obs, c_ring, options);
}

InverseSolution SolveBiobjectiveModel(const ForwardProblem& p,
                                      const Observation& obs,
                                      const Eigen::VectorXd& c_ring,
                                      const Eigen::VectorXd& weights) {
  ModelOptions options;
  options.kind = ModelKind::kBiobjective;
  options.weights = weights;
  return SolveInverse(p, obs, c_ring, options);
}

InverseSolution SolveBigMModel(const ForwardProblem& p, const Observation& obs,
                               const Eigen::VectorXd& c_ring,
                               std::optional<double> big_m) {
  ModelOptions options;
  options.kind = ModelKind::kBigM;
  options.big_m = big_m;
  return SolveInverse(p, obs, c_ring, options);
}

double DefaultBigM(const ForwardProblem& p, const Observation& obs,
                   const Eigen::VectorXd& c_ring) {
  const double a_max = p.A.size() ? p.A.cwiseAbs().maxCoeff() : 0.0;
  const double c_max = c_ring.size() ? c_ring.cwiseAbs().maxCoeff() : 0.0;
  return 10.0 * (1.0 + obs.x_hat.lpNorm<Eigen::Infinity>() +
                 c_max * (1.0 + a_max));
}

double DefaultTau(double reference_objective) {
  if (reference_objective < 1e3) return 1e-3;
  if (reference_objective < 1e4) return 1e-4;
  if (reference_objective < 1e5) return 1e-5;
  return 1e-6;
}

Eigen::VectorXd DefaultWeights(const Observation& obs,
                               const SupportSets& supports) {
  Eigen::VectorXd w(static_cast<Eigen::Index>(supports.in.size()));
  for (size_t k = 0; k < supports.in.size(); ++k) {
    w(k) = std::max(obs.x_hat(supports.in[k]), 2.0);
  }
  return w;
}

LpCertificate RecoverLpCertificate(const ForwardProblem& p,
                                   const Observation& obs,
                                   const InverseSolution& sol) {
  const LpSolution lp = SolveLp(RelaxationModel(p, sol.c_hat));
  if (lp.status != LpStatus::kOptimal) {
    throw Error(ErrorCode::kCertificateMismatch,
                std::string("relaxation under the recovered cost is ") +
                    std::string(LpStatusName(lp.status)));
  }
  LpCertificate cert;
  cert.x = lp.x;
  cert.y = lp.y;
  cert.s = lp.s;
  cert.objective = lp.objective;
  const double scale = 1e-6 * (1.0 + std::abs(lp.objective));
  cert.identity_residual =
      std::abs(sol.eps_total() - (sol.c_hat.dot(obs.x_hat) - lp.objective));
  if (cert.identity_residual > scale) {
    throw Error(ErrorCode::kCertificateMismatch,
                "gap identity off by " + std::to_string(cert.identity_residual));
  }
  if (sol.model_kind == ModelKind::kBigM && sol.delta.size() > 0) {
    const Eigen::VectorXd x_lp = obs.x_hat - sol.delta;
    if (std::abs(sol.c_hat.dot(x_lp) - lp.objective) > scale) {
      throw Error(ErrorCode::kCertificateMismatch,
                  "x_hat - delta is not an optimal relaxation point");
    }
  }
  return cert;
}

FoldedCost FoldSlackCosts(const ForwardProblem& p, const Eigen::VectorXd& c) {
  const int ns = p.structural_count;
  Eigen::VectorXd pi = Eigen::VectorXd::Zero(p.num_rows());
  for (int r = 0; r < p.num_rows(); ++r) {
    if (p.slack_of_row[r]) pi(r) = p.slack_sign(r) * c(*p.slack_of_row[r]);
  }
  FoldedCost folded;
  folded.cost = Eigen::VectorXd::Zero(p.num_cols());
  folded.cost.head(ns) =
      c.head(ns) - p.A.leftCols(ns).transpose() * pi;
  folded.offset = p.b.dot(pi);
  return folded;
}

InverseSolution ShiftEpsilon(const ForwardProblem& p, const Observation& obs,
                             const InverseSolution& sol, int column,
                             double alpha) {
  if (column < 0 || column >= p.num_cols() || !p.is_slack(column)) {
    throw Error(ErrorCode::kInvalidShift, "shift needs a slack column",
                column);
  }
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw Error(ErrorCode::kInvalidShift, "alpha must lie in [0, 1]");
  }
  if (!(obs.x_hat(column) > 0.0) || !(sol.eps(column) > 0.0)) {
    throw Error(ErrorCode::kInvalidShift,
                "slack column has no gap to shift", column);
  }
  InverseSolution out = sol;
  const double moved = alpha * sol.eps(column) / obs.x_hat(column);
  out.eps(column) = (1.0 - alpha) * sol.eps(column);
  Eigen::VectorXd with_slack = sol.c_hat;
  with_slack(column) -= moved;

  const FoldedCost folded = FoldSlackCosts(p, with_slack);
  Eigen::VectorXd pi = Eigen::VectorXd::Zero(p.num_rows());
  for (int r = 0; r < p.num_rows(); ++r) {
    if (p.slack_of_row[r]) {
      pi(r) = p.slack_sign(r) * with_slack(*p.slack_of_row[r]);
    }
  }
  out.c_hat = folded.cost;
  out.y = sol.y - pi;
  const Eigen::VectorXd c0 = sol.c_hat - sol.f + sol.g;
  SplitDeviation(out.c_hat, c0, out);
  out.lp_certificate.reset();
  return out;
}

ScaledCost ScaleCost(const ForwardProblem& p, const Eigen::VectorXd& c_hat,
                     const Eigen::VectorXd& c_ring) {
  const int ns = p.structural_count;
  const Eigen::VectorXd ch = c_hat.head(ns);
  const Eigen::VectorXd cr = c_ring.head(ns);
  if (ch.cwiseAbs().maxCoeff() == 0.0) {
    throw Error(ErrorCode::kNoScale, "cost is zero on every structural entry");
  }
  auto deviation = [&](double lambda) { return (lambda * ch - cr).lpNorm<1>(); };
  ScaledCost best;
  best.lambda = 1.0;
  best.l1_deviation = deviation(1.0);
  for (int j = 0; j < ns; ++j) {
    if (ch(j) == 0.0) continue;
    const double lambda = cr(j) / ch(j);
    if (!(lambda > 0.0) || !std::isfinite(lambda)) continue;
    const double value = deviation(lambda);
    // Prefer the smallest deviation, then the factor closest to 1.
    if (value < best.l1_deviation - 1e-12 ||
        (value <= best.l1_deviation + 1e-12 &&
         std::abs(std::log(lambda)) < std::abs(std::log(best.lambda)))) {
      best.lambda = lambda;
      best.l1_deviation = value;
    }
  }
  best.cost = Eigen::VectorXd::Zero(p.num_cols());
  best.cost.head(ns) = best.lambda * ch;
  return best;
}

double RelativeGap(double c_hat_x_hat, double lower_bound) {
  return std::abs(c_hat_x_hat - lower_bound) /
         std::max(1.0, std::abs(c_hat_x_hat));
}

Metrics ComputeMetrics(const Eigen::VectorXd& c_hat,
                       const Eigen::VectorXd& c_ring, const Observation& obs,
                       double eps_total, double forward_upper_bound,
                       double forward_lower_bound) {
  Metrics m;
  const Eigen::Index n = std::min(c_hat.size(), c_ring.size());
  const double ring_norm = c_ring.lpNorm<1>();
  const double denom = std::max(1.0, ring_norm);
  m.c_hat_x_hat = c_hat.dot(obs.x_hat);
  m.forward_upper_bound = forward_upper_bound;
  m.forward_lower_bound = forward_lower_bound;
  m.rgap = RelativeGap(m.c_hat_x_hat, forward_lower_bound);
  m.rnorm_diff_of_norms = (c_hat.lpNorm<1>() - ring_norm) / denom;
  m.l1_deviation = (c_hat.head(n) - c_ring.head(n)).lpNorm<1>();
  m.rnorm_norm_of_diff = m.l1_deviation / denom;
  m.eps_total = eps_total;
  m.optimal_at_e2 = m.rgap <= 1e-2;
  m.optimal_at_e5 = m.rgap <= 1e-5;
  return m;
}

void EvaluateSolution(const ForwardProblem& p, const Observation& obs,
                      const Eigen::VectorXd& c_ring, InverseSolution& sol,
                      const MilpLimits& limits) {
  const MilpSolution fwd = SolveForward(p, sol.c_hat, limits);
  const double ub = fwd.has_incumbent() ? fwd.upper_bound : kInfinity;
  sol.metrics = ComputeMetrics(sol.c_hat, ExpandCost(p, c_ring), obs,
                               sol.eps_total(), ub, fwd.lower_bound);
  sol.metrics.cpu_seconds = sol.solve_seconds;
}

}  // namespace invopt
