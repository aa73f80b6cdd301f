#ifndef INVOPT_INVERSE_MIO_H_
#define INVOPT_INVERSE_MIO_H_

// Inverse mixed-integer optimization through the LP relaxation.
//
// Every model searches c = c_ring + f - g together with a dual pair for the
// relaxation at x_hat:
//   [support]     a_i'y + eps_i / x_hat_i - f_i + g_i = c_ring_i   for x_hat_i > 0
//   [off-support] a_i'y + s_i - f_i + g_i = c_ring_i               for x_hat_i = 0
//   [gap]         b'y + e'eps - x_hat'f + x_hat'g = c_ring'x_hat
// and eps_total = c'x_hat - z_LP(c) once eps is the smallest gap for c.
// f and g exist only for structural columns, so slack costs stay zero.
//
// The plain (concise) model returns c = c_ring. The tolerance model adds
// e'eps <= tau * e'(f + g); the bi-objective model minimizes
// e'(f + g) + w'eps; the big-M model replaces [gap] by complementarity with
// binaries and returns the LP point x_hat - delta directly.

#include <optional>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "invopt/lp.h"
#include "invopt/milp.h"
#include "invopt/model.h"

namespace invopt {

enum class ModelKind { kTolerance, kBiobjective, kBigM, kConcise };
std::string_view ModelKindName(ModelKind kind);
// Accepts "tolerance", "biobj", "bigm", "concise".
std::optional<ModelKind> ParseModelKind(std::string_view name);

struct LpCertificate {
  Eigen::VectorXd x;  // an optimal relaxation point under c_hat
  Eigen::VectorXd y;
  Eigen::VectorXd s;
  double objective = 0.0;         // z_LP
  double identity_residual = 0.0;  // |e'eps - (c_hat'x_hat - z_LP)|
};

struct Metrics {
  double rgap = 0.0;
  double rnorm_diff_of_norms = 0.0;
  double rnorm_norm_of_diff = 0.0;
  double eps_total = 0.0;
  double l1_deviation = 0.0;
  double cpu_seconds = 0.0;
  double forward_upper_bound = 0.0;
  double forward_lower_bound = 0.0;
  double c_hat_x_hat = 0.0;
  bool optimal_at_e2 = false;
  bool optimal_at_e5 = false;
};

struct InverseSolution {
  ModelKind model_kind = ModelKind::kConcise;
  Eigen::VectorXd c_hat;  // n, slack entries zero
  Eigen::VectorXd f;      // n
  Eigen::VectorXd g;      // n
  Eigen::VectorXd eps;    // n, zero outside the support
  Eigen::VectorXd s;      // n, zero on the support
  Eigen::VectorXd y;      // m
  Eigen::VectorXd delta;  // n, big-M only
  double big_m = 0.0;     // big-M only
  double master_objective = 0.0;
  double solve_seconds = 0.0;
  std::optional<LpCertificate> lp_certificate;
  Metrics metrics;

  double l1_deviation() const { return (f + g).sum(); }
  double eps_total() const { return eps.sum(); }
};

// Variable indices of a concise LP; -1 marks an absent variable.
struct ConciseLayout {
  int m = 0;
  int n = 0;
  std::vector<int> eps;  // per column
  std::vector<int> s;    // per column
  std::vector<int> f;    // per column, -1 on slacks
  std::vector<int> g;
  int num_vars = 0;
  int y(int row) const { return row; }
};

struct ConciseLp {
  LpModel model;
  ConciseLayout layout;
  SupportSets supports;
};

// Throws kInternal if some support index has x_hat_i <= support_tol.
ConciseLp BuildConciseLp(const ForwardProblem& p, const Observation& obs,
                         const SupportSets& supports,
                         const Eigen::VectorXd& c_ring);

// e'eps <= tau * e'(f + g).
void AddToleranceRow(ConciseLp& lp, double tau);
// Adds w_i * eps_i to the objective; `weights` is indexed like supports.in.
void AddEpsilonWeights(ConciseLp& lp, const Eigen::VectorXd& weights);
// (x_hat - x_bar)'(c_ring + f - g) <= 0 for a full-length point x_bar.
void AddOptimalityCutRow(ConciseLp& lp, const Eigen::VectorXd& x_hat,
                         const Eigen::VectorXd& x_bar,
                         const Eigen::VectorXd& c_ring);

struct ModelOptions {
  ModelKind kind = ModelKind::kTolerance;
  std::optional<double> tau;
  std::optional<Eigen::VectorXd> weights;  // indexed like supports.in
  std::optional<double> big_m;
  std::vector<Eigen::VectorXd> cuts;  // full-length points
  MilpLimits milp_limits;             // big-M search only
  double support_tol = Tolerances{}.support;
};

// Solves the selected model, re-derives the smallest gap for the returned
// cost (LP models), and attaches the relaxation certificate. Metrics are
// left empty; see EvaluateSolution.
InverseSolution SolveInverse(const ForwardProblem& p, const Observation& obs,
                             const Eigen::VectorXd& c_ring,
                             const ModelOptions& options);

InverseSolution SolveConciseModel(const ForwardProblem& p,
                                  const Observation& obs,
                                  const Eigen::VectorXd& c_ring);
// Throws kToleranceInfeasible if the LP has no solution.
InverseSolution SolveToleranceModel(
    const ForwardProblem& p, const Observation& obs,
    const Eigen::VectorXd& c_ring, double tau,
    const std::vector<Eigen::VectorXd>& cuts = {});
InverseSolution SolveBiobjectiveModel(const ForwardProblem& p,
                                      const Observation& obs,
                                      const Eigen::VectorXd& c_ring,
                                      const Eigen::VectorXd& weights);
InverseSolution SolveBigMModel(const ForwardProblem& p, const Observation& obs,
                               const Eigen::VectorXd& c_ring,
                               std::optional<double> big_m = std::nullopt);

// 10 * (1 + |x_hat|_inf + |c_ring|_inf * (1 + max |a_ij|)).
double DefaultBigM(const ForwardProblem& p, const Observation& obs,
                   const Eigen::VectorXd& c_ring);

// Threshold ladder on the reference objective c_ring'x_ring.
double DefaultTau(double reference_objective);
// max(x_hat_i, 2) for i in supports.in.
Eigen::VectorXd DefaultWeights(const Observation& obs,
                               const SupportSets& supports);

// Solves the relaxation under c_hat and checks
// |e'eps - (c_hat'x_hat - z_LP)| <= 1e-6 (1 + |z_LP|). For big-M solutions
// x_hat - delta must also attain z_LP. Throws kCertificateMismatch.
LpCertificate RecoverLpCertificate(const ForwardProblem& p,
                                   const Observation& obs,
                                   const InverseSolution& sol);

struct FoldedCost {
  Eigen::VectorXd cost;  // full length, slack entries zero
  double offset = 0.0;   // original objective = folded objective + offset
};

// Moves slack costs onto the structural columns through sigma = S(b - A x).
FoldedCost FoldSlackCosts(const ForwardProblem& p, const Eigen::VectorXd& c);

// Moves the fraction alpha of eps_i / x_hat_i into a negative cost on slack
// column i, then folds it into the structural costs. f, g and y are
// recomputed; the LP certificate is dropped. Throws kInvalidShift unless i
// is a slack column on the support with eps_i > 0.
InverseSolution ShiftEpsilon(const ForwardProblem& p, const Observation& obs,
                             const InverseSolution& sol, int column,
                             double alpha);

struct ScaledCost {
  double lambda = 1.0;
  Eigen::VectorXd cost;
  double l1_deviation = 0.0;
};

// argmin over lambda > 0 of |lambda c_hat - c_ring|_1 on structural entries,
// found at the breakpoints c_ring_j / c_hat_j. Throws kNoScale when every
// structural entry of c_hat is zero.
ScaledCost ScaleCost(const ForwardProblem& p, const Eigen::VectorXd& c_hat,
                     const Eigen::VectorXd& c_ring);

double RelativeGap(double c_hat_x_hat, double lower_bound);

Metrics ComputeMetrics(const Eigen::VectorXd& c_hat,
                       const Eigen::VectorXd& c_ring,
                       const Observation& obs, double eps_total,
                       double forward_upper_bound, double forward_lower_bound);

// Runs the forward MILP under c_hat within `limits` and fills sol.metrics.
void EvaluateSolution(const ForwardProblem& p, const Observation& obs,
                      const Eigen::VectorXd& c_ring, InverseSolution& sol,
                      const MilpLimits& limits = {});

}  // namespace invopt

#endif  // INVOPT_INVERSE_MIO_H_
