#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "gwrec/offspring.hpp"
#include "gwrec/recfun.hpp"
#include "gwrec/rng.hpp"
#include "gwrec/state_distribution.hpp"
#include "gwrec/tree.hpp"

namespace gwrec {

// Everything needed to move one level up the spine: the spine node's child
// count, which child is on the spine (1-based), its uniform, and the root
// values of the other zeta - 1 children in child order.
struct SpineStep {
  std::uint32_t zeta;
  std::uint32_t marked_index;
  double u;
  std::vector<State> unmarked_values;
};

// A function S -> S stored as its table of images.
class StateMap {
 public:
  explicit StateMap(std::vector<State> table) : table_(std::move(table)) {}
  static StateMap identity(std::size_t k);

  State operator()(State x) const { return table_[x]; }
  std::size_t size() const noexcept { return table_.size(); }
  std::span<const State> table() const noexcept { return table_; }

  bool is_constant() const;
  std::size_t image_size() const;

  // (this o inner)(x) = this(inner(x)).
  StateMap after(const StateMap& inner) const;

  friend bool operator==(const StateMap&, const StateMap&) = default;

 private:
  std::vector<State> table_;
};

// Where the values of the unmarked children come from: fresh unconditional
// trees evaluated with eval_root, or direct draws from a known law of W.
// Both produce the same step law; the law source avoids the heavy-tailed
// tree sizes of critical trees.
class UnmarkedValueSource {
 public:
  static UnmarkedValueSource trees(std::uint64_t node_cap = kDefaultNodeCap) {
    return UnmarkedValueSource(node_cap, std::nullopt);
  }
  static UnmarkedValueSource law(StateDistribution w_law) {
    return UnmarkedValueSource(0, std::move(w_law));
  }

  bool uses_trees() const noexcept { return !law_.has_value(); }
  std::uint64_t node_cap() const noexcept { return node_cap_; }
  const std::optional<StateDistribution>& w_law() const noexcept { return law_; }

  State draw(const RecursiveSpec& spec, const OffspringDistribution& d, Rng& rng) const;

 private:
  UnmarkedValueSource(std::uint64_t cap, std::optional<StateDistribution> law)
      : node_cap_(cap), law_(std::move(law)) {}

  std::uint64_t node_cap_;
  std::optional<StateDistribution> law_;
};

// Draws zeta (size-biased), the marked index, the node uniform, then the
// unmarked values, in that order.
SpineStep sample_spine_step(const RecursiveSpec& spec, const SizeBiasedDistribution& zeta,
                            const OffspringDistribution& d, Rng& rng,
                            const UnmarkedValueSource& source);

// table[x] = f_zeta(children with x in the marked slot, e.u).
StateMap step_map(const RecursiveSpec& spec, const SpineStep& e);

struct CftpResult {
  State value;
  std::uint64_t levels_used;
};

// Perfect sample of W_inf. Walks down the spine from the root, composing
// G_m = G_{m-1} o step_m, until G_m is constant, and returns the constant.
// Each level's randomness is drawn once. Throws NonCoalescent when G is
// still non-constant after max_levels levels.
CftpResult cftp_sample(const RecursiveSpec& spec, const OffspringDistribution& d, Rng& rng,
                       const UnmarkedValueSource& source, std::uint64_t max_levels = 100'000);

using TransitionMatrix = Eigen::MatrixXd;

// Mass below which the zeta sum is cut for parametric offspring laws.
inline constexpr double kZetaMassCutoff = 1e-12;

// P(x, .) = sum_z Pr{zeta=z} (1/z) sum_M law of f_z(x at slot M, others i.i.d.
// w_law). Throws NoKernel without an exact kernel.
TransitionMatrix transition_matrix_exact(const RecursiveSpec& spec, const OffspringDistribution& d,
                                         const StateDistribution& w_law);
// Same, with w_law from w_law_iterate at default options.
TransitionMatrix transition_matrix_exact(const RecursiveSpec& spec, const OffspringDistribution& d);

// Empirical rows from `samples` spine steps; every start state is pushed
// through the same step (common random numbers, the double-chain coupling).
TransitionMatrix transition_matrix_mc(const RecursiveSpec& spec, const OffspringDistribution& d,
                                      std::uint64_t samples, Rng& rng,
                                      const UnmarkedValueSource& source);

// Solves pi P = pi, sum pi = 1. Throws NotUnique when the solution space has
// dimension > 1 and DomainError if the residual ||pi P - pi||_1 >= 1e-10.
StateDistribution stationary_distribution(const TransitionMatrix& p);

struct SurvivalCurve {
  std::uint64_t reps;
  // still_running[t] = replicates whose composed map is non-constant after
  // t levels, t = 0..t_max.
  std::vector<std::uint64_t> still_running;

  double survival(std::uint64_t t) const;
  double stderr_at(std::uint64_t t) const;
};

// Empirical Pr{no coalescence within t levels} for t = 0..t_max. Replicate r
// uses Rng::substream(seed, r).
SurvivalCurve coalescence_probe(const RecursiveSpec& spec, const OffspringDistribution& d,
                                std::uint64_t t_max, std::uint64_t reps, std::uint64_t seed,
                                const UnmarkedValueSource& source, unsigned threads = 1);

}  // namespace gwrec
