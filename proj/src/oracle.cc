#include "invopt/oracle.h"

#include <algorithm>
#include <cmath>

#include "invopt/error.h"
#include "invopt/lp.h"

namespace invopt {

namespace {

constexpr double kPointTol = 1e-9;

// A structural row written as a'x <= beta.
struct UpperRow {
  Eigen::VectorXd a;
  double beta;
};

std::vector<UpperRow> AsUpperRows(const ForwardProblem& p) {
  std::vector<UpperRow> rows;
  const int ns = p.structural_count;
  for (int i = 0; i < p.num_rows(); ++i) {
    Eigen::VectorXd a = p.A.row(i).head(ns).transpose();
    const Relation rel = p.relation(i);
    if (rel != Relation::kGreaterEqual) rows.push_back({a, p.b(i)});
    if (rel != Relation::kLessEqual) rows.push_back({-a, -p.b(i)});
  }
  return rows;
}

bool StructuralFeasible(const ForwardProblem& p, const Eigen::VectorXd& x) {
  const int ns = p.structural_count;
  for (int i = 0; i < p.num_rows(); ++i) {
    const double lhs = p.A.row(i).head(ns).dot(x);
    const double scale = 1.0 + std::abs(p.b(i));
    switch (p.relation(i)) {
      case Relation::kLessEqual:
        if (lhs > p.b(i) + kPointTol * scale) return false;
        break;
      case Relation::kGreaterEqual:
        if (lhs < p.b(i) - kPointTol * scale) return false;
        break;
      case Relation::kEqual:
        if (std::abs(lhs - p.b(i)) > kPointTol * scale) return false;
        break;
    }
  }
  return true;
}

// Walks every lattice point of the integer part of the box, calling
// visit(full_point) for each feasible one. Continuous structural variables are
// resolved by an LP minimizing `profile_cost` with the integers fixed.
template <typename Visit>
void WalkLattice(const ForwardProblem& p, const Eigen::VectorXd& profile_cost,
                 int64_t box_limit, Visit visit) {
  const VariableBox box = PropagateBounds(p);
  if (box.empty) return;
  const int ns = p.structural_count;
  std::vector<int> ints;
  bool mixed = false;
  for (int j = 0; j < ns; ++j) {
    if (p.integer[j]) {
      ints.push_back(j);
    } else {
      mixed = true;
    }
  }
  double count = 1.0;
  for (int j : ints) {
    if (!std::isfinite(box.upper(j))) {
      throw Error(ErrorCode::kSizeLimit,
                  "integer variable has no finite bound", j);
    }
    count *= box.upper(j) - box.lower(j) + 1.0;
    if (count > static_cast<double>(box_limit)) {
      throw Error(ErrorCode::kSizeLimit,
                  "lattice exceeds " + std::to_string(box_limit) + " points");
    }
  }

  LpModel profile;
  if (mixed) {
    profile = RelaxationModel(p, profile_cost);
  }

  Eigen::VectorXd x = Eigen::VectorXd::Zero(ns);
  for (int j : ints) x(j) = box.lower(j);
  while (true) {
    if (!mixed) {
      if (StructuralFeasible(p, x)) visit(CompletePoint(p, x));
    } else {
      for (int j : ints) {
        profile.lower(j) = x(j);
        profile.upper(j) = x(j);
      }
      const LpSolution sol = SolveLp(profile);
      if (sol.status == LpStatus::kOptimal) {
        Eigen::VectorXd full = sol.x;
        for (int j : ints) full(j) = x(j);
        visit(full);
      } else if (sol.status == LpStatus::kUnbounded) {
        throw Error(ErrorCode::kSizeLimit,
                    "continuous profile is unbounded");
      }
    }
    // Odometer with the last integer variable turning fastest.
    int k = static_cast<int>(ints.size()) - 1;
    while (k >= 0) {
      const int j = ints[k];
      if (x(j) < box.upper(j)) {
        x(j) += 1.0;
        break;
      }
      x(j) = box.lower(j);
      --k;
    }
    if (k < 0) break;
  }
}

}  // namespace

VariableBox PropagateBounds(const ForwardProblem& p) {
  const int ns = p.structural_count;
  VariableBox box;
  box.lower = Eigen::VectorXd::Zero(ns);
  box.upper = Eigen::VectorXd::Constant(ns, kInfinity);
  const std::vector<UpperRow> rows = AsUpperRows(p);

  auto round_int = [&](int j) {
    if (!p.integer[j]) return;
    box.lower(j) = std::ceil(box.lower(j) - 1e-9);
    if (std::isfinite(box.upper(j))) {
      box.upper(j) = std::floor(box.upper(j) + 1e-9);
    }
  };

  for (int pass = 0; pass < 100; ++pass) {
    bool changed = false;
    for (const UpperRow& row : rows) {
      for (int j = 0; j < ns; ++j) {
        const double aj = row.a(j);
        if (aj == 0.0) continue;
        // Minimum activity of the other terms.
        double rest = 0.0;
        for (int k = 0; k < ns && std::isfinite(rest); ++k) {
          if (k == j || row.a(k) == 0.0) continue;
          rest += row.a(k) > 0 ? row.a(k) * box.lower(k)
                               : row.a(k) * box.upper(k);
        }
        if (!std::isfinite(rest)) continue;
        const double limit = (row.beta - rest) / aj;
        if (aj > 0 && limit < box.upper(j) - 1e-9) {
          box.upper(j) = limit;
          round_int(j);
          changed = true;
        } else if (aj < 0 && limit > box.lower(j) + 1e-9) {
          box.lower(j) = limit;
          round_int(j);
          changed = true;
        }
        if (box.lower(j) > box.upper(j) + 1e-9) {
          box.empty = true;
          return box;
        }
      }
    }
    if (!changed) break;
  }
  return box;
}

std::vector<Eigen::VectorXd> EnumerateIntegerPoints(const ForwardProblem& p,
                                                    int64_t box_limit) {
  std::vector<Eigen::VectorXd> points;
  WalkLattice(p, Eigen::VectorXd::Zero(p.num_cols()), box_limit,
              [&](const Eigen::VectorXd& x) { points.push_back(x); });
  return points;
}

ForwardOracleResult BruteForceForward(const ForwardProblem& p,
                                      const Eigen::VectorXd& cost,
                                      int64_t box_limit) {
  const Eigen::VectorXd c = ExpandCost(p, cost);
  ForwardOracleResult result;
  result.value = kInfinity;
  WalkLattice(p, c, box_limit, [&](const Eigen::VectorXd& x) {
    const double v = c.dot(x);
    const double tie = kPointTol * (1.0 + std::abs(v));
    if (v < result.value - tie) {
      result.value = v;
      result.argmin.clear();
      result.argmin.push_back(x);
    } else if (v <= result.value + tie) {
      result.argmin.push_back(x);
    }
  });
  return result;
}

InverseCertificate CertifyInverse(const ForwardProblem& p,
                                  const Observation& obs,
                                  const Eigen::VectorXd& cost, double tol,
                                  int64_t box_limit) {
  const Eigen::VectorXd c = ExpandCost(p, cost);
  const ForwardOracleResult fwd = BruteForceForward(p, c, box_limit);
  InverseCertificate cert;
  cert.forward_value = fwd.value;
  const double gap = c.dot(obs.x_hat) - fwd.value;
  cert.optimal = gap <= tol * (1.0 + std::abs(fwd.value));
  cert.gap = cert.optimal ? 0.0 : gap;
  return cert;
}

std::vector<Eigen::Vector2d> EnumerateVertices2d(const ForwardProblem& p) {
  if (p.structural_count != 2) {
    throw Error(ErrorCode::kSizeLimit,
                "vertex enumeration needs exactly two structural variables");
  }
  std::vector<Eigen::Vector2d> normals;
  std::vector<double> rhs;
  for (int i = 0; i < p.num_rows(); ++i) {
    normals.push_back(p.A.row(i).head(2).transpose());
    rhs.push_back(p.b(i));
  }
  normals.push_back({1.0, 0.0});
  rhs.push_back(0.0);
  normals.push_back({0.0, 1.0});
  rhs.push_back(0.0);

  std::vector<Eigen::Vector2d> vertices;
  const int k = static_cast<int>(normals.size());
  for (int i = 0; i < k; ++i) {
    for (int j = i + 1; j < k; ++j) {
      Eigen::Matrix2d m;
      m.row(0) = normals[i].transpose();
      m.row(1) = normals[j].transpose();
      if (std::abs(m.determinant()) < 1e-12) continue;
      const Eigen::Vector2d v = m.inverse() * Eigen::Vector2d(rhs[i], rhs[j]);
      if (v.minCoeff() < -kPointTol || !StructuralFeasible(p, v)) continue;
      const bool seen = std::any_of(
          vertices.begin(), vertices.end(),
          [&](const Eigen::Vector2d& w) { return (w - v).norm() < 1e-9; });
      if (!seen) vertices.push_back(v);
    }
  }
  return vertices;
}

double VertexMinimum2d(const ForwardProblem& p, const Eigen::Vector2d& cost) {
  double best = kInfinity;
  for (const Eigen::Vector2d& v : EnumerateVertices2d(p)) {
    best = std::min(best, cost.dot(v));
  }
  return best;
}

}  // namespace invopt
