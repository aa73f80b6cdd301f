#include "invopt/instance_io.h"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include "invopt/error.h"

namespace invopt {

using nlohmann::json;

namespace {

[[noreturn]] void Fail(const std::string& where, const std::string& what) {
  throw Error(ErrorCode::kSchema, where + ": " + what);
}

void CheckKeys(const json& j, const std::string& where,
               std::initializer_list<std::string_view> allowed) {
  if (!j.is_object()) Fail(where, "expected an object");
  for (const auto& [key, value] : j.items()) {
    bool known = false;
    for (std::string_view a : allowed) known = known || key == a;
    if (!known) Fail(where, "unknown key \"" + key + "\"");
  }
}

const json& Required(const json& j, const std::string& where,
                     const char* key) {
  auto it = j.find(key);
  if (it == j.end()) Fail(where, std::string("missing \"") + key + "\"");
  return *it;
}

double Number(const json& j, const std::string& where) {
  if (!j.is_number()) Fail(where, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) Fail(where, "number is not finite");
  return v;
}

int64_t Integer(const json& j, const std::string& where) {
  if (!j.is_number_integer()) Fail(where, "expected an integer");
  return j.get<int64_t>();
}

std::vector<double> NumberArray(const json& j, const std::string& where,
                                std::optional<size_t> size) {
  if (!j.is_array()) Fail(where, "expected an array");
  if (size && j.size() != *size) {
    Fail(where, "expected " + std::to_string(*size) + " entries, got " +
                    std::to_string(j.size()));
  }
  std::vector<double> out;
  for (size_t i = 0; i < j.size(); ++i) {
    out.push_back(Number(j[i], where + "[" + std::to_string(i) + "]"));
  }
  return out;
}

Eigen::VectorXd ToVector(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(),
                                           static_cast<Eigen::Index>(v.size()));
}

Relation ParseRelation(const json& j, const std::string& where) {
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "<=") return Relation::kLessEqual;
    if (s == "=") return Relation::kEqual;
    if (s == ">=") return Relation::kGreaterEqual;
  }
  Fail(where, "relation must be \"<=\", \"=\" or \">=\"");
}

const char* RelationText(Relation r) {
  switch (r) {
    case Relation::kLessEqual: return "<=";
    case Relation::kEqual: return "=";
    case Relation::kGreaterEqual: return ">=";
  }
  return "?";
}

RawProblem ParseProblem(const json& j) {
  const std::string where = "problem";
  CheckKeys(j, where, {"num_vars", "constraints", "lower_bounds",
                       "upper_bounds", "integer"});
  RawProblem raw;
  const int64_t n = Integer(Required(j, where, "num_vars"), where + ".num_vars");
  if (n < 1 || n > 100000) Fail(where + ".num_vars", "out of range");
  raw.num_vars = static_cast<int>(n);
  const size_t ns = static_cast<size_t>(n);

  const json& rows = Required(j, where, "constraints");
  if (!rows.is_array()) Fail(where + ".constraints", "expected an array");
  for (size_t i = 0; i < rows.size(); ++i) {
    const std::string w = where + ".constraints[" + std::to_string(i) + "]";
    CheckKeys(rows[i], w, {"coeffs", "relation", "rhs"});
    RawConstraint row;
    row.coeffs = NumberArray(Required(rows[i], w, "coeffs"), w + ".coeffs", ns);
    row.relation = ParseRelation(Required(rows[i], w, "relation"),
                                 w + ".relation");
    row.rhs = Number(Required(rows[i], w, "rhs"), w + ".rhs");
    raw.constraints.push_back(std::move(row));
  }
  if (auto it = j.find("lower_bounds"); it != j.end()) {
    raw.lower_bounds = NumberArray(*it, where + ".lower_bounds", ns);
  }
  if (auto it = j.find("upper_bounds"); it != j.end()) {
    if (!it->is_array() || it->size() != ns) {
      Fail(where + ".upper_bounds",
           "expected an array of " + std::to_string(ns) + " entries");
    }
    for (size_t k = 0; k < ns; ++k) {
      const json& e = (*it)[k];
      if (e.is_null()) {
        raw.upper_bounds.push_back(std::nullopt);
      } else {
        raw.upper_bounds.push_back(
            Number(e, where + ".upper_bounds[" + std::to_string(k) + "]"));
      }
    }
  }
  if (auto it = j.find("integer"); it != j.end()) {
    if (!it->is_array() || it->size() != ns) {
      Fail(where + ".integer",
           "expected an array of " + std::to_string(ns) + " booleans");
    }
    for (const json& e : *it) {
      if (!e.is_boolean()) Fail(where + ".integer", "expected booleans");
      raw.integer.push_back(e.get<bool>());
    }
  }
  return raw;
}

InstanceConfig ParseConfig(const json& j) {
  const std::string where = "config";
  CheckKeys(j, where, {"tau", "weights", "big_m", "forward_time_cap",
                       "node_limit", "max_iters", "total_time_cap", "seed"});
  InstanceConfig cfg;
  auto positive = [&](const char* key) -> std::optional<double> {
    auto it = j.find(key);
    if (it == j.end()) return std::nullopt;
    const double v = Number(*it, where + "." + key);
    if (!(v > 0)) Fail(where + "." + key, "must be positive");
    return v;
  };
  cfg.tau = positive("tau");
  cfg.big_m = positive("big_m");
  cfg.forward_time_cap = positive("forward_time_cap");
  cfg.total_time_cap = positive("total_time_cap");
  if (auto it = j.find("weights"); it != j.end()) {
    cfg.weights = NumberArray(*it, where + ".weights", std::nullopt);
  }
  if (auto it = j.find("node_limit"); it != j.end()) {
    cfg.node_limit = Integer(*it, where + ".node_limit");
    if (*cfg.node_limit < 1) Fail(where + ".node_limit", "must be positive");
  }
  if (auto it = j.find("max_iters"); it != j.end()) {
    const int64_t v = Integer(*it, where + ".max_iters");
    if (v < 0 || v > 100000000) Fail(where + ".max_iters", "out of range");
    cfg.max_iters = static_cast<int>(v);
  }
  if (auto it = j.find("seed"); it != j.end()) {
    if (!it->is_number_integer() || it->get<int64_t>() < 0) {
      Fail(where + ".seed", "expected a non-negative integer");
    }
    cfg.seed = it->get<uint64_t>();
  }
  return cfg;
}

}  // namespace

bool SameInstance(const Instance& a, const Instance& b) {
  if (a.name != b.name || a.group != b.group || !(a.config == b.config) ||
      a.observation != b.observation || a.reference_cost != b.reference_cost) {
    return false;
  }
  const RawProblem& p = a.problem;
  const RawProblem& q = b.problem;
  if (p.num_vars != q.num_vars || p.lower_bounds != q.lower_bounds ||
      p.upper_bounds != q.upper_bounds || p.integer != q.integer ||
      p.constraints.size() != q.constraints.size()) {
    return false;
  }
  for (size_t i = 0; i < p.constraints.size(); ++i) {
    const RawConstraint& r = p.constraints[i];
    const RawConstraint& s = q.constraints[i];
    if (r.coeffs != s.coeffs || r.relation != s.relation || r.rhs != s.rhs) {
      return false;
    }
  }
  return true;
}

Instance ParseInstance(const json& j) {
  CheckKeys(j, "instance", {"format", "name", "group", "problem",
                            "observation", "reference_cost", "config"});
  const json& format = Required(j, "instance", "format");
  if (!format.is_number_integer() || format.get<int64_t>() != kInstanceFormat) {
    Fail("format", "only format 1 is supported");
  }
  Instance inst;
  const json& name = Required(j, "instance", "name");
  if (!name.is_string() || name.get<std::string>().empty()) {
    Fail("name", "expected a non-empty string");
  }
  inst.name = name.get<std::string>();
  if (auto it = j.find("group"); it != j.end()) {
    if (!it->is_string()) Fail("group", "expected a string");
    inst.group = it->get<std::string>();
  }
  inst.problem = ParseProblem(Required(j, "instance", "problem"));
  inst.problem.name = inst.name;
  const size_t ns = static_cast<size_t>(inst.problem.num_vars);
  inst.observation =
      ToVector(NumberArray(Required(j, "instance", "observation"),
                           "observation", ns));
  inst.reference_cost =
      ToVector(NumberArray(Required(j, "instance", "reference_cost"),
                           "reference_cost", ns));
  if (auto it = j.find("config"); it != j.end()) {
    inst.config = ParseConfig(*it);
  }
  return inst;
}

Instance ParseInstanceText(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kSchema, std::string("malformed JSON: ") + e.what());
  }
  return ParseInstance(j);
}

Instance LoadInstance(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::kSchema, "cannot read " + path.string());
  }
  std::stringstream buf;
  buf << in.rdbuf();
  return ParseInstanceText(buf.str());
}

json InstanceToJson(const Instance& inst) {
  const RawProblem& raw = inst.problem;
  json problem;
  problem["num_vars"] = raw.num_vars;
  json rows = json::array();
  for (const RawConstraint& r : raw.constraints) {
    rows.push_back({{"coeffs", r.coeffs},
                    {"relation", RelationText(r.relation)},
                    {"rhs", r.rhs}});
  }
  problem["constraints"] = rows;
  if (!raw.lower_bounds.empty()) problem["lower_bounds"] = raw.lower_bounds;
  if (!raw.upper_bounds.empty()) {
    json ub = json::array();
    for (const auto& u : raw.upper_bounds) {
      ub.push_back(u ? json(*u) : json(nullptr));
    }
    problem["upper_bounds"] = ub;
  }
  if (!raw.integer.empty()) {
    json flags = json::array();
    for (bool b : raw.integer) flags.push_back(b);
    problem["integer"] = flags;
  }

  json j;
  j["format"] = kInstanceFormat;
  j["name"] = inst.name;
  if (!inst.group.empty()) j["group"] = inst.group;
  j["problem"] = problem;
  j["observation"] = std::vector<double>(
      inst.observation.data(), inst.observation.data() + inst.observation.size());
  j["reference_cost"] = std::vector<double>(
      inst.reference_cost.data(),
      inst.reference_cost.data() + inst.reference_cost.size());

  const InstanceConfig& c = inst.config;
  json cfg = json::object();
  if (c.tau) cfg["tau"] = *c.tau;
  if (c.weights) cfg["weights"] = *c.weights;
  if (c.big_m) cfg["big_m"] = *c.big_m;
  if (c.forward_time_cap) cfg["forward_time_cap"] = *c.forward_time_cap;
  if (c.node_limit) cfg["node_limit"] = *c.node_limit;
  if (c.max_iters) cfg["max_iters"] = *c.max_iters;
  if (c.total_time_cap) cfg["total_time_cap"] = *c.total_time_cap;
  if (c.seed) cfg["seed"] = *c.seed;
  if (!cfg.empty()) j["config"] = cfg;
  return j;
}

void SaveInstance(const Instance& inst, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kSchema, "cannot write " + path.string());
  out << InstanceToJson(inst).dump(2) << "\n";
}

double Sig12(double x) {
  if (!std::isfinite(x) || x == 0.0) return x;
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.12g", x);
  return std::strtod(buf, nullptr);
}

json Sig12Array(const Eigen::VectorXd& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(Sig12(v(i)));
  return out;
}

Eigen::VectorXd ParseCost(const json& j, int num_vars) {
  const json* arr = &j;
  if (j.is_object()) {
    CheckKeys(j, "cost file", {"cost"});
    arr = &Required(j, "cost file", "cost");
  }
  return ToVector(
      NumberArray(*arr, "cost", static_cast<size_t>(num_vars)));
}

}  // namespace invopt
