#ifndef INVOPT_TESTS_TEST_UTIL_H_
#define INVOPT_TESTS_TEST_UTIL_H_

#include <random>
#include <vector>

#include <Eigen/Dense>

#include "invopt/model.h"

namespace invopt::testing {

// The four-row, two-variable polytope used throughout the unit tests.
inline RawProblem Ex1Raw() {
  RawProblem raw;
  raw.name = "ex1";
  raw.num_vars = 2;
  raw.constraints = {{{-4, -3}, Relation::kLessEqual, -19},
                     {{-1, -3}, Relation::kLessEqual, -8},
                     {{6, 1}, Relation::kLessEqual, 30},
                     {{-3, 5}, Relation::kLessEqual, 17}};
  raw.integer = {true, true};
  return raw;
}

inline ForwardProblem Ex1() { return Standardize(Ex1Raw()); }

inline Eigen::VectorXd Vec(std::initializer_list<double> values) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(values.size()));
  int i = 0;
  for (double x : values) v(i++) = x;
  return v;
}

inline const std::vector<Eigen::Vector2d>& Ex1IntegerPoints() {
  static const std::vector<Eigen::Vector2d> points = {
      {2, 4}, {3, 3}, {3, 4}, {3, 5}, {4, 2}, {4, 3}, {4, 4}, {4, 5}};
  return points;
}

// Relaxation vertices K, M, N, L as exact fractions.
inline const std::vector<Eigen::Vector2d>& Ex1Vertices() {
  static const std::vector<Eigen::Vector2d> vertices = {
      {44.0 / 29, 125.0 / 29},
      {11.0 / 3, 13.0 / 9},
      {82.0 / 17, 18.0 / 17},
      {133.0 / 33, 64.0 / 11}};
  return vertices;
}

// Bounded pure-integer problem with a known interior integer point x0.
// Rows mix <= and >=, every variable gets an upper bound.
struct RandomInstance {
  RawProblem raw;
  Eigen::VectorXd center;
};

inline RandomInstance RandomIntegerProblem(std::mt19937_64& rng, int ns,
                                           int m, int box = 4) {
  std::uniform_int_distribution<int> coef(-5, 5);
  std::uniform_int_distribution<int> start(1, box - 1);
  std::uniform_int_distribution<int> room(0, 3);
  std::bernoulli_distribution flip(0.3);
  RandomInstance inst;
  inst.raw.name = "random";
  inst.raw.num_vars = ns;
  inst.center = Eigen::VectorXd(ns);
  for (int j = 0; j < ns; ++j) inst.center(j) = start(rng);
  for (int i = 0; i < m; ++i) {
    RawConstraint row;
    row.coeffs.resize(ns);
    double lhs = 0;
    bool nonzero = false;
    for (int j = 0; j < ns; ++j) {
      row.coeffs[j] = coef(rng);
      nonzero = nonzero || row.coeffs[j] != 0;
      lhs += row.coeffs[j] * inst.center(j);
    }
    if (!nonzero) row.coeffs[i % ns] = 1, lhs += inst.center(i % ns);
    if (flip(rng)) {
      row.relation = Relation::kGreaterEqual;
      row.rhs = lhs - room(rng);
    } else {
      row.relation = Relation::kLessEqual;
      row.rhs = lhs + room(rng);
    }
    inst.raw.constraints.push_back(row);
  }
  inst.raw.upper_bounds.assign(ns, static_cast<double>(box));
  inst.raw.integer.assign(ns, true);
  return inst;
}

}  // namespace invopt::testing

#endif  // INVOPT_TESTS_TEST_UTIL_H_
