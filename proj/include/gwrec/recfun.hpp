#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gwrec/rng.hpp"
#include "gwrec/state_distribution.hpp"
#include "gwrec/tree.hpp"

namespace gwrec {

// f_l: (number of children, child values in order, node uniform) -> value.
// Must be a pure function of its arguments.
using NodeFunction = std::function<State(std::size_t arity, std::span<const State> children,
                                         double u)>;

// Adds weight * law(f_l(children, U)) into `acc` (size k), U uniform.
using ExactKernel = std::function<void(std::size_t arity, std::span<const State> children,
                                       double weight, std::span<double> acc)>;

// Writes into `out` the law of f_l(V_1, ..., V_l, U) for independent child
// values V_i ~ child_laws[i]. Optional fast path for kernels that factorize.
using ProductLaw = std::function<void(std::size_t arity,
                                      std::span<const std::span<const double>> child_laws,
                                      std::span<double> out)>;

// A family (f_0, f_1, ...) over the state space {0, ..., k-1}.
//
// States are 0-based; the conventional labels {1, ..., k} are a relabeling.
// Each node gets one uniform, leaves included: a leaf's value is f_0(U) and
// must have law `leaf_law`.
class RecursiveSpec {
 public:
  RecursiveSpec(std::string name, std::size_t k, StateDistribution leaf_law, NodeFunction node_fn,
                std::optional<ExactKernel> exact_kernel = std::nullopt,
                std::optional<ProductLaw> product_law = std::nullopt);

  const std::string& name() const noexcept { return name_; }
  std::size_t state_count() const noexcept { return k_; }
  const StateDistribution& leaf_law() const noexcept { return leaf_law_; }
  bool has_kernel() const noexcept { return exact_kernel_.has_value(); }

  // f_l(children, u); throws SpecError if the value is outside the state space.
  State apply(std::size_t arity, std::span<const State> children, double u) const;

  // Law of f_l(children, U). Throws NoKernel without an exact kernel.
  void kernel(std::size_t arity, std::span<const State> children, double weight,
              std::span<double> acc) const;

  // Law of f_l over independent children with the given laws, using the
  // product-law hook when present, otherwise enumerating the supports.
  // Throws NoKernel without an exact kernel.
  std::vector<double> child_product_law(std::size_t arity,
                                        std::span<const std::span<const double>> child_laws) const;

 private:
  std::string name_;
  std::size_t k_;
  StateDistribution leaf_law_;
  NodeFunction node_fn_;
  std::optional<ExactKernel> exact_kernel_;
  std::optional<ProductLaw> product_law_;
};

// Root value of `tree`: one reverse-preorder pass with an explicit value
// stack. Draws exactly one uniform per node, in reverse preorder.
State eval_root(const RecursiveSpec& spec, const OrderedTree& tree, Rng& rng);

// As eval_root, but the leaves (in preorder) take `leaf_values` instead of
// f_0(U). Only internal nodes draw uniforms. Throws LengthMismatch when the
// number of values differs from the number of leaves.
State eval_root_with_fixed_leaf_values(const RecursiveSpec& spec, const OrderedTree& tree,
                                       std::span<const State> leaf_values, Rng& rng);

}  // namespace gwrec
