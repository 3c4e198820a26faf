#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "gwrec/offspring.hpp"
#include "gwrec/recfun.hpp"

namespace gwrec {

// How unbounded counts are folded into {0, ..., k-1}.
enum class Reduction {
  mod,  // value mod k
  min,  // min(value, k-1)
};

// An example name plus its JSON parameters. Recognized names:
//   counting, leaf_counter, path_length, transversal, random_child, minimax,
//   boolean_functions, binary_subtree, majority, median.
// Common parameters: "k", "p", "q", "reduction" ("mod"|"min") and
// "offspring" (see OffspringDistribution::from_json). example_registry()
// documents which apply to which example.
struct ExampleConfig {
  std::string name;
  nlohmann::json params = nlohmann::json::object();
};

struct BuiltExample {
  RecursiveSpec spec;
  OffspringDistribution offspring;
};

// Throws ConfigError naming the violated constraint.
BuiltExample build_example(const ExampleConfig& config);

struct ExampleInfo {
  std::string name;
  std::string summary;
  std::string parameters;
  std::string oracles;
  bool coalescent;
};

const std::vector<ExampleInfo>& example_registry();

// Limit law W + W' of the random path length in T_n, the convolution of two
// geometric(p0) laws on {0, 1, ...},
//   (i + 1) p0^2 (1 - p0)^i.
double path_length_limit_pmf(double p0, std::uint64_t i);

struct TransversalLimit {
  double rho_star;  // Pr{W_inf = 1}
  double r;         // Pr{W = 1}
  double residual;  // |r - p - (1 - p)(g(r) - g(0))|
};

// r solves r = p + (1-p)(g(r) - g(0)) (bisection on [0, 1]);
// rho* = p / (1 - (1-p) g'(r)).
TransversalLimit transversal_rho_star(const OffspringDistribution& d, double p);

struct MinimaxLimits {
  double p_star;             // Pr{W = 1}
  double conditional_limit;  // lim Pr{root of T_n = 1}
  double denominator;
  bool degenerate;  // |denominator| < 1e-9; the limit is then not meaningful
};

// Max-node probability `max_prob`, leaf Bernoulli parameter `leaf_prob`.
//   p* = leaf p0 + max (1 - g(1 - p*)) + (1 - max)(g(p*) - p0)
//   limit = max (1 - g'(1-p*)) / (1 - max g'(1-p*) - (1 - max) g'(p*))
MinimaxLimits minimax_limits(const OffspringDistribution& d, double max_prob, double leaf_prob);

struct MajorityLimits {
  double p_star;
  double p01;    // Pr{Binomial(2k, p*) > k}
  double p10;    // Pr{Binomial(2k, p*) < k}
  double limit;  // p01 / (p01 + p10)
};

// Majority of 2k+1 children with Bernoulli(p) leaves.
MajorityLimits majority_limits(std::uint32_t k, double p);

// Pair (i, j), 1 <= i < j <= arity, chosen by u: [0, 1) is cut into
// C(arity, 2) equal intervals in lexicographic order of the pairs.
std::pair<std::uint32_t, std::uint32_t> binary_subtree_pair_selection(std::uint32_t arity, double u);

}  // namespace gwrec
