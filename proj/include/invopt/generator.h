#ifndef INVOPT_GENERATOR_H_
#define INVOPT_GENERATOR_H_

// Small bounded pure-integer instances whose observation is a deliberately
// suboptimal point: the k-th best integer point under the reference cost,
// k in {2, 3, 4}. Rows mix <= and >= around an interior integer center, so
// the feasible set is never empty.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "invopt/instance_io.h"

namespace invopt {

struct GeneratorOptions {
  int num_vars = 3;
  int num_rows = 3;
  int box = 4;  // upper bound of every variable
};

Instance GenerateInstance(std::mt19937_64& rng, const GeneratorOptions& opts,
                          const std::string& name, const std::string& group);

// per_size instances for each size n (n variables, n rows), grouped "n<size>".
std::vector<Instance> GenerateSuite(uint64_t seed,
                                    const std::vector<int>& sizes = {3, 4, 5},
                                    int per_size = 20);

}  // namespace invopt

#endif  // INVOPT_GENERATOR_H_
