#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gwrec/offspring.hpp"
#include "gwrec/rng.hpp"

namespace gwrec {

inline constexpr std::uint64_t kDefaultNodeCap = 100'000'000;

// True when the sequence is the preorder offspring-count sequence of a finite
// ordered tree: prefix sums of (c_i - 1) stay >= 0 before the last node and
// reach -1 exactly at the last one.
bool is_lukasiewicz(std::span<const std::uint32_t> offspring);

// Finite rooted ordered tree stored as its preorder offspring counts.
class OrderedTree {
 public:
  // Throws InvalidTree unless `offspring` is a Lukasiewicz sequence.
  explicit OrderedTree(std::vector<std::uint32_t> offspring);

  static OrderedTree leaf() { return OrderedTree(std::vector<std::uint32_t>{0}); }

  std::size_t size() const noexcept { return offspring_.size(); }
  std::span<const std::uint32_t> offspring() const noexcept { return offspring_; }
  std::size_t leaf_count() const;

  // One line of space-separated counts, e.g. "2 0 0".
  std::string to_string() const;
  static OrderedTree parse(std::string_view line);

  friend bool operator==(const OrderedTree&, const OrderedTree&) = default;

 private:
  struct Trusted {};
  OrderedTree(Trusted, std::vector<std::uint32_t> offspring) : offspring_(std::move(offspring)) {}

  friend OrderedTree sample_unconditional(const OffspringDistribution&, Rng&, std::uint64_t);
  friend OrderedTree sample_conditioned(const OffspringDistribution&, std::uint64_t, Rng&);

  std::vector<std::uint32_t> offspring_;
};

// Edge-count height.
std::size_t height(const OrderedTree& tree);

// Unconditional Galton-Watson tree, generated in preorder. Throws CapExceeded
// as soon as the tree would need more than `node_cap` nodes; callers decide
// what to do, since resampling would bias the law.
OrderedTree sample_unconditional(const OffspringDistribution& d, Rng& rng,
                                 std::uint64_t node_cap = kDefaultNodeCap);

// Samples an unconditional tree only as far as needed to decide whether its
// height is at least `m`. Exact for that event; draws are a prefix of those
// sample_unconditional would make.
bool sample_height_at_least(const OffspringDistribution& d, Rng& rng, std::size_t m,
                            std::uint64_t node_cap = kDefaultNodeCap);

// Tree conditioned on having exactly n nodes. The offspring sequence is an
// i.i.d. sample conditioned on summing to n - 1 (rejection), rotated by the
// cycle lemma to the unique valid cyclic shift. For finite-support laws the
// rejection runs on the multinomial count vector and the accepted counts are
// arranged by a uniform shuffle, which has the same law.
// Throws InvalidSize for n < 1 and SpanMismatch unless n = 1 mod span(d).
OrderedTree sample_conditioned(const OffspringDistribution& d, std::uint64_t n, Rng& rng);

// Index at which the cycle-lemma rotation starts: the first position after
// the first prefix attaining the minimum of the partial sums of (c_i - 1).
std::size_t cycle_lemma_start(std::span<const std::uint32_t> offspring);

// One level of Kesten's tree: the spine node's child count, which child
// continues the spine (1-based), and the unconditional trees hanging from
// the other zeta - 1 children, in child order.
struct SpineLevel {
  std::uint32_t zeta;
  std::uint32_t marked_index;
  std::vector<OrderedTree> subtrees;
};

// Lazily generates the levels v_0, v_1, ... of Kesten's tree. Holds
// references to the law and the generator; both must outlive it.
class SpineGenerator {
 public:
  SpineGenerator(const OffspringDistribution& d, Rng& rng,
                 std::uint64_t node_cap = kDefaultNodeCap)
      : offspring_(d), size_biased_(d), rng_(rng), node_cap_(node_cap) {}

  SpineLevel next();

 private:
  const OffspringDistribution& offspring_;
  SizeBiasedDistribution size_biased_;
  Rng& rng_;
  std::uint64_t node_cap_;
};

}  // namespace gwrec
