#pragma once

#include <cstdint>

#include "gwrec/offspring.hpp"
#include "gwrec/recfun.hpp"
#include "gwrec/rng.hpp"
#include "gwrec/state_distribution.hpp"
#include "gwrec/stats.hpp"

namespace gwrec {

struct WLawOptions {
  double tol = 1e-9;
  std::uint64_t max_depth = 10'000;
};

struct WLawResult {
  StateDistribution law;
  std::uint64_t iterations;
  // TV distance between the last two iterates; the stopping certificate.
  double last_step_tv;
  bool converged;
  // Pr{height(T) >= iterations}: the mass of trees the truncated recursion
  // has not fully resolved.
  double height_tail;
};

// One application of the distributional map
//   Phi(mu) = sum_l p_l * law of f_l(W_1, ..., W_l, U),  W_i i.i.d. mu.
// Parametric offspring laws are truncated once the remaining mass is below
// `mass_cutoff`. Throws NoKernel without an exact kernel.
StateDistribution apply_distributional_map(const RecursiveSpec& spec,
                                           const OffspringDistribution& d,
                                           const StateDistribution& mu, double mass_cutoff);

// Law of W, the root value of an unconditional tree, by iterating Phi from
// the leaf law q. The m-th iterate is the exact root law of the tree cut at
// depth m with leaf-law values at the cut, so the iteration picks the
// solution generated by the finite tree even when the fixed-point identity
// has several. Stops when the TV step is below tol or after max_depth
// iterations; non-convergence is reported in the result, not thrown.
WLawResult w_law_iterate(const RecursiveSpec& spec, const OffspringDistribution& d,
                         const WLawOptions& options = {});

enum class CapPolicy {
  propagate,           // first oversized tree throws CapExceeded
  discard_and_report,  // oversized trees are dropped and counted
};

struct WLawSample {
  EmpiricalDistribution counts;
  std::uint64_t discarded;  // trees dropped at the node cap
};

struct MonteCarloOptions {
  std::uint64_t node_cap = kDefaultNodeCap;
  CapPolicy cap_policy = CapPolicy::propagate;
  unsigned threads = 1;
};

// Empirical law of eval_root over `samples` independent unconditional trees.
// Work is split into fixed batches with seeds derive_seed(seed, batch), so
// results do not depend on the thread count. Under CapPolicy::propagate the
// thrown CapExceeded carries the number of trees attempted in its batch.
WLawSample w_law_monte_carlo(const RecursiveSpec& spec, const OffspringDistribution& d,
                             std::uint64_t samples, std::uint64_t seed,
                             const MonteCarloOptions& options = {});

}  // namespace gwrec
