#include "invopt/generator.h"

#include <algorithm>
#include <cstdio>

#include "invopt/error.h"
#include "invopt/oracle.h"

namespace invopt {

namespace {

// One attempt; returns false when the draw is unusable.
bool TryGenerate(std::mt19937_64& rng, const GeneratorOptions& opts,
                 Instance& inst) {
  const int ns = opts.num_vars;
  std::uniform_int_distribution<int> coef(-5, 5);
  std::uniform_int_distribution<int> start(1, opts.box - 1);
  std::uniform_int_distribution<int> room(0, 3);
  std::uniform_int_distribution<int> rank(2, 4);
  std::bernoulli_distribution flip(0.3);

  std::vector<double> center(ns);
  for (double& v : center) v = start(rng);
  RawProblem raw;
  raw.name = inst.name;
  raw.num_vars = ns;
  for (int i = 0; i < opts.num_rows; ++i) {
    RawConstraint row;
    row.coeffs.resize(ns);
    for (double& a : row.coeffs) a = coef(rng);
    if (std::all_of(row.coeffs.begin(), row.coeffs.end(),
                    [](double a) { return a == 0.0; })) {
      row.coeffs[i % ns] = 1.0;
    }
    double lhs = 0.0;
    for (int j = 0; j < ns; ++j) lhs += row.coeffs[j] * center[j];
    if (flip(rng)) {
      row.relation = Relation::kGreaterEqual;
      row.rhs = lhs - room(rng);
    } else {
      row.relation = Relation::kLessEqual;
      row.rhs = lhs + room(rng);
    }
    raw.constraints.push_back(std::move(row));
  }
  raw.upper_bounds.assign(ns, static_cast<double>(opts.box));
  raw.integer.assign(ns, true);

  Eigen::VectorXd c(ns);
  for (int j = 0; j < ns; ++j) c(j) = coef(rng);
  if (c.cwiseAbs().maxCoeff() == 0.0) return false;

  const ForwardProblem p = Standardize(raw);
  std::vector<Eigen::VectorXd> points = EnumerateIntegerPoints(p);
  const int k = rank(rng);
  if (static_cast<int>(points.size()) < k) return false;
  const Eigen::VectorXd cf = ReferenceCost(p, c);
  std::stable_sort(points.begin(), points.end(),
                   [&](const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
                     return cf.dot(a) < cf.dot(b);
                   });
  const Eigen::VectorXd& pick = points[k - 1];
  // A tie with the optimum would make the instance trivial.
  if (cf.dot(pick) <= cf.dot(points.front()) + 1e-9) return false;

  inst.problem = std::move(raw);
  inst.observation = pick.head(ns);
  inst.reference_cost = c;
  return true;
}

}  // namespace

Instance GenerateInstance(std::mt19937_64& rng, const GeneratorOptions& opts,
                          const std::string& name, const std::string& group) {
  if (opts.num_vars < 1 || opts.num_rows < 1 || opts.box < 2) {
    throw Error(ErrorCode::kSchema, "generator sizes out of range");
  }
  Instance inst;
  inst.name = name;
  inst.group = group;
  for (int attempt = 0; attempt < 1000; ++attempt) {
    if (TryGenerate(rng, opts, inst)) return inst;
  }
  throw Error(ErrorCode::kInternal, "generator found no usable instance");
}

std::vector<Instance> GenerateSuite(uint64_t seed, const std::vector<int>& sizes,
                                    int per_size) {
  std::mt19937_64 rng(seed);
  std::vector<Instance> suite;
  for (int size : sizes) {
    GeneratorOptions opts;
    opts.num_vars = size;
    opts.num_rows = size;
    const std::string group = "n" + std::to_string(size);
    for (int i = 0; i < per_size; ++i) {
      char name[64];
      std::snprintf(name, sizeof(name), "gen-n%d-%02d", size, i + 1);
      suite.push_back(GenerateInstance(rng, opts, name, group));
    }
  }
  return suite;
}

}  // namespace invopt
