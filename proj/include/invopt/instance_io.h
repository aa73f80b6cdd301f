#ifndef INVOPT_INSTANCE_IO_H_
#define INVOPT_INSTANCE_IO_H_

// JSON instance files, format 1:
//
//   {"format": 1, "name": "ex1", "group": "demo",
//    "problem": {"num_vars": 2,
//                "constraints": [{"coeffs": [-4, -3], "relation": "<=",
//                                 "rhs": -19}, ...],
//                "lower_bounds": [0, 0], "upper_bounds": [5, null],
//                "integer": [true, true]},
//    "observation": [4, 2], "reference_cost": [3, 1],
//    "config": {"tau": 0.001, "weights": [...], "big_m": 100,
//               "forward_time_cap": 30, "node_limit": 100000,
//               "max_iters": 1000, "total_time_cap": 3600, "seed": 7}}
//
// Unknown keys anywhere are rejected and every number must be finite. All
// schema problems raise Error(kSchema).

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "invopt/model.h"

namespace invopt {

inline constexpr int kInstanceFormat = 1;

struct InstanceConfig {
  std::optional<double> tau;
  std::optional<std::vector<double>> weights;
  std::optional<double> big_m;
  std::optional<double> forward_time_cap;
  std::optional<int64_t> node_limit;
  std::optional<int> max_iters;
  std::optional<double> total_time_cap;
  std::optional<uint64_t> seed;

  bool operator==(const InstanceConfig&) const = default;
};

struct Instance {
  std::string name;
  std::string group;  // empty when absent
  RawProblem problem;
  Eigen::VectorXd observation;     // structural
  Eigen::VectorXd reference_cost;  // structural
  InstanceConfig config;
};

bool SameInstance(const Instance& a, const Instance& b);

Instance ParseInstance(const nlohmann::json& j);
// Also maps JSON syntax errors to kSchema.
Instance ParseInstanceText(std::string_view text);
Instance LoadInstance(const std::filesystem::path& path);

// Numbers are written exactly so that parse(emit(x)) == x.
nlohmann::json InstanceToJson(const Instance& inst);
void SaveInstance(const Instance& inst, const std::filesystem::path& path);

// Rounds to 12 significant digits; report values go through this.
double Sig12(double x);
nlohmann::json Sig12Array(const Eigen::VectorXd& v);

// Parses a structural cost file: either a bare array or {"cost": [...]}.
Eigen::VectorXd ParseCost(const nlohmann::json& j, int num_vars);

}  // namespace invopt

#endif  // INVOPT_INSTANCE_IO_H_
