#include "gwrec/recfun.hpp"

#include <string>

#include "gwrec/errors.hpp"

namespace gwrec {
namespace {

// Largest product-of-supports enumeration child_product_law will attempt.
constexpr double kEnumerationLimit = 5e7;

}  // namespace

RecursiveSpec::RecursiveSpec(std::string name, std::size_t k, StateDistribution leaf_law,
                             NodeFunction node_fn, std::optional<ExactKernel> exact_kernel,
                             std::optional<ProductLaw> product_law)
    : name_(std::move(name)),
      k_(k),
      leaf_law_(std::move(leaf_law)),
      node_fn_(std::move(node_fn)),
      exact_kernel_(std::move(exact_kernel)),
      product_law_(std::move(product_law)) {
  if (k_ < 1) throw SpecError("state space must have at least one state");
  if (leaf_law_.size() != k_) throw SpecError("leaf law does not match the state space size");
  if (!node_fn_) throw SpecError("node function is empty");
}

State RecursiveSpec::apply(std::size_t arity, std::span<const State> children, double u) const {
  const State v = node_fn_(arity, children, u);
  if (v >= k_) {
    throw SpecError(name_ + ": node function returned " + std::to_string(v) +
                    " outside {0, ..., " + std::to_string(k_ - 1) + "}");
  }
  return v;
}

void RecursiveSpec::kernel(std::size_t arity, std::span<const State> children, double weight,
                           std::span<double> acc) const {
  if (!exact_kernel_) throw NoKernel(name_ + " has no exact kernel");
  (*exact_kernel_)(arity, children, weight, acc);
}

std::vector<double> RecursiveSpec::child_product_law(
    std::size_t arity, std::span<const std::span<const double>> child_laws) const {
  if (!exact_kernel_) throw NoKernel(name_ + " has no exact kernel");
  if (child_laws.size() != arity) throw DimensionMismatch("one law per child is required");
  std::vector<double> out(k_, 0.0);
  if (product_law_) {
    (*product_law_)(arity, child_laws, out);
    return out;
  }

  // Odometer over the product of the child supports.
  std::vector<std::vector<State>> supports(arity);
  double combinations = 1.0;
  for (std::size_t i = 0; i < arity; ++i) {
    for (State s = 0; s < child_laws[i].size(); ++s) {
      if (child_laws[i][s] > 0.0) supports[i].push_back(s);
    }
    if (supports[i].empty()) return out;
    combinations *= static_cast<double>(supports[i].size());
  }
  if (combinations > kEnumerationLimit) {
    throw Error(name_ + ": exact law needs " + std::to_string(combinations) +
                " child configurations; too many to enumerate");
  }
  std::vector<std::size_t> digit(arity, 0);
  std::vector<State> children(arity);
  for (;;) {
    double weight = 1.0;
    for (std::size_t i = 0; i < arity; ++i) {
      children[i] = supports[i][digit[i]];
      weight *= child_laws[i][children[i]];
    }
    (*exact_kernel_)(arity, children, weight, out);
    std::size_t pos = 0;
    while (pos < arity && ++digit[pos] == supports[pos].size()) digit[pos++] = 0;
    if (pos == arity) break;
  }
  return out;
}

namespace {

template <typename LeafValue>
State eval_reverse_preorder(const RecursiveSpec& spec, const OrderedTree& tree, Rng& rng,
                            LeafValue&& leaf_value) {
  const auto offspring = tree.offspring();
  std::vector<State> stack;
  std::vector<State> children;
  stack.reserve(64);
  for (std::size_t i = offspring.size(); i-- > 0;) {
    const std::size_t arity = offspring[i];
    if (arity == 0) {
      stack.push_back(leaf_value(rng));
      continue;
    }
    // The first child's value sits on top of the stack.
    children.assign(stack.rbegin(), stack.rbegin() + static_cast<std::ptrdiff_t>(arity));
    stack.resize(stack.size() - arity);
    stack.push_back(spec.apply(arity, children, rng.uniform()));
  }
  return stack.back();
}

}  // namespace

State eval_root(const RecursiveSpec& spec, const OrderedTree& tree, Rng& rng) {
  return eval_reverse_preorder(spec, tree, rng, [&spec](Rng& r) {
    return spec.apply(0, {}, r.uniform());
  });
}

State eval_root_with_fixed_leaf_values(const RecursiveSpec& spec, const OrderedTree& tree,
                                       std::span<const State> leaf_values, Rng& rng) {
  if (leaf_values.size() != tree.leaf_count()) {
    throw LengthMismatch("tree has " + std::to_string(tree.leaf_count()) + " leaves but " +
                         std::to_string(leaf_values.size()) + " leaf values were given");
  }
  for (State v : leaf_values) {
    if (v >= spec.state_count()) throw SpecError("leaf value outside the state space");
  }
  // Reverse preorder meets the leaves last-to-first.
  std::size_t next = leaf_values.size();
  return eval_reverse_preorder(spec, tree, rng,
                               [&](Rng&) { return leaf_values[--next]; });
}

}  // namespace gwrec
