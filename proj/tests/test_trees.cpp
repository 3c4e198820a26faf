#include <gtest/gtest.h>

#include <optional>

#include <algorithm>
#include <map>
#include <numeric>

#include "gwrec/errors.hpp"
#include "gwrec/stats.hpp"
#include "gwrec/tree.hpp"

using namespace gwrec;

namespace {

// Every preorder code with n nodes, by brute force over {0..n-1}^n.
std::vector<std::vector<std::uint32_t>> all_trees(std::uint32_t n) {
  std::vector<std::vector<std::uint32_t>> out;
  std::vector<std::uint32_t> code(n, 0);
  for (;;) {
    std::int64_t walk = 0;
    bool valid = true;
    for (std::uint32_t i = 0; i < n; ++i) {
      walk += static_cast<std::int64_t>(code[i]) - 1;
      if (walk < 0 && i + 1 < n) valid = false;
    }
    if (valid && walk == -1) out.push_back(code);
    std::uint32_t pos = 0;
    while (pos < n && ++code[pos] == n) code[pos++] = 0;
    if (pos == n) break;
  }
  return out;
}

}  // namespace

TEST(Trees, LukasiewiczValidation) {
  EXPECT_TRUE(is_lukasiewicz(std::vector<std::uint32_t>{0}));
  EXPECT_TRUE(is_lukasiewicz(std::vector<std::uint32_t>{2, 0, 0}));
  EXPECT_FALSE(is_lukasiewicz(std::vector<std::uint32_t>{0, 2, 0}));
  EXPECT_FALSE(is_lukasiewicz(std::vector<std::uint32_t>{2, 0}));
  EXPECT_FALSE(is_lukasiewicz(std::vector<std::uint32_t>{}));
  EXPECT_THROW(OrderedTree({1, 0, 0}), InvalidTree);
}

TEST(Trees, Height) {
  EXPECT_EQ(height(OrderedTree({0})), 0u);
  EXPECT_EQ(height(OrderedTree({2, 0, 0})), 1u);
  // root(child(leaf), leaf)
  EXPECT_EQ(height(OrderedTree({2, 1, 0, 0})), 2u);
  EXPECT_EQ(height(OrderedTree({1, 1, 1, 0})), 3u);
  EXPECT_EQ(height(OrderedTree({3, 0, 2, 0, 1, 0, 0})), 3u);
}

TEST(Trees, SerializationRoundTrip) {
  const OrderedTree t({3, 0, 2, 0, 1, 0, 0});
  EXPECT_EQ(t.to_string(), "3 0 2 0 1 0 0");
  EXPECT_EQ(OrderedTree::parse(t.to_string()), t);
  EXPECT_EQ(OrderedTree::parse("  2 0   0 "), OrderedTree({2, 0, 0}));
  EXPECT_THROW(OrderedTree::parse("2 x 0"), InvalidTree);
  EXPECT_THROW(OrderedTree::parse("2 0"), InvalidTree);
  EXPECT_EQ(t.leaf_count(), 4u);
}

TEST(Trees, SmallConditionedTrees) {
  Rng rng(1);
  EXPECT_EQ(sample_conditioned(OffspringDistribution::geometric(), 1, rng), OrderedTree::leaf());
  EXPECT_EQ(sample_conditioned(OffspringDistribution::catalan(), 1, rng), OrderedTree::leaf());
  for (int i = 0; i < 100; ++i) {
    EXPECT_EQ(sample_conditioned(OffspringDistribution::catalan(), 3, rng), OrderedTree({2, 0, 0}));
  }
}

TEST(Trees, ConditionedErrors) {
  Rng rng(1);
  EXPECT_THROW(sample_conditioned(OffspringDistribution::catalan(), 0, rng), InvalidSize);
  EXPECT_THROW(sample_conditioned(OffspringDistribution::catalan(), 4, rng), SpanMismatch);
  EXPECT_THROW(sample_conditioned(OffspringDistribution::zero_or(3), 5, rng), SpanMismatch);
  EXPECT_NO_THROW(sample_conditioned(OffspringDistribution::zero_or(3), 7, rng));
}

TEST(Trees, EnumerationOracle) {
  // Catalan numbers 1, 1, 2, 5, 14.
  EXPECT_EQ(all_trees(1).size(), 1u);
  EXPECT_EQ(all_trees(3).size(), 2u);
  EXPECT_EQ(all_trees(4).size(), 5u);
  EXPECT_EQ(all_trees(5).size(), 14u);
}

TEST(Trees, GeometricFourNodeTreesAreUniform) {
  const auto shapes = all_trees(4);
  std::map<std::vector<std::uint32_t>, std::size_t> index;
  for (std::size_t i = 0; i < shapes.size(); ++i) index[shapes[i]] = i;
  const auto d = OffspringDistribution::geometric();
  Rng rng(404);
  std::vector<std::uint64_t> counts(shapes.size(), 0);
  const int draws = 100'000;
  for (int i = 0; i < draws; ++i) {
    const OrderedTree t = sample_conditioned(d, 4, rng);
    const std::vector<std::uint32_t> code(t.offspring().begin(), t.offspring().end());
    ASSERT_TRUE(index.count(code));
    ++counts[index[code]];
  }
  for (auto c : counts) {
    const double freq = static_cast<double>(c) / draws;
    EXPECT_GE(freq, 0.19);
    EXPECT_LE(freq, 0.21);
  }
  EXPECT_GT(chi_square_uniformity(counts), 0.001);
}

TEST(Trees, FiniteSupportConditionedLawIsExact) {
  // Exact law of T_5 under p = (0.3, 0.5, 0.1, 0.1): proportional to the
  // product of p over the code.
  const std::vector<double> p{0.3, 0.5, 0.1, 0.1};
  const auto d = OffspringDistribution::explicit_law(p);
  const auto shapes = all_trees(5);
  std::vector<double> weight;
  for (const auto& code : shapes) {
    double w = 1.0;
    for (auto c : code) w *= c < p.size() ? p[c] : 0.0;
    weight.push_back(w);
  }
  const double total = std::accumulate(weight.begin(), weight.end(), 0.0);
  for (auto& w : weight) w /= total;
  std::map<std::vector<std::uint32_t>, std::size_t> index;
  for (std::size_t i = 0; i < shapes.size(); ++i) index[shapes[i]] = i;
  Rng rng(55);
  std::vector<std::uint64_t> counts(shapes.size(), 0);
  for (int i = 0; i < 200'000; ++i) {
    const OrderedTree t = sample_conditioned(d, 5, rng);
    ++counts[index.at(std::vector<std::uint32_t>(t.offspring().begin(), t.offspring().end()))];
  }
  EXPECT_GT(chi_square_gof(counts, weight), 0.001);
}

TEST(Trees, CycleLemma) {
  Rng rng(9);
  const auto d = OffspringDistribution::geometric();
  for (int trial = 0; trial < 500; ++trial) {
    // Random sequence with sum n - 1.
    const std::uint64_t n = 2 + rng.below(40);
    std::vector<std::uint32_t> seq;
    std::uint64_t sum;
    do {
      seq.clear();
      sum = 0;
      for (std::uint64_t i = 0; i < n; ++i) {
        seq.push_back(static_cast<std::uint32_t>(d.sample(rng)));
        sum += seq.back();
      }
    } while (sum != n - 1);
    int valid = 0;
    std::size_t valid_shift = 0;
    for (std::size_t s = 0; s < n; ++s) {
      std::vector<std::uint32_t> r(seq);
      std::rotate(r.begin(), r.begin() + static_cast<std::ptrdiff_t>(s), r.end());
      if (is_lukasiewicz(r)) {
        ++valid;
        valid_shift = s;
      }
    }
    ASSERT_EQ(valid, 1);
    EXPECT_EQ(cycle_lemma_start(seq), valid_shift);
  }
}

TEST(Trees, ConditionedInvariants) {
  Rng rng(3);
  for (const auto& [d, n] : {std::pair{OffspringDistribution::catalan(), 201},
                            std::pair{OffspringDistribution::geometric(), 150},
                            std::pair{OffspringDistribution::poisson(), 99},
                            std::pair{OffspringDistribution::zero_or(3), 301}}) {
    for (int i = 0; i < 50; ++i) {
      const OrderedTree t = sample_conditioned(d, static_cast<std::uint64_t>(n), rng);
      ASSERT_EQ(t.size(), static_cast<std::size_t>(n));
      ASSERT_TRUE(is_lukasiewicz(t.offspring()));
      EXPECT_EQ((t.size() - 1) % d.span(), 0u);
    }
  }
}

TEST(Trees, CatalanLeafCount) {
  Rng rng(8);
  for (int i = 0; i < 200; ++i) {
    const OrderedTree t = sample_conditioned(OffspringDistribution::catalan(), 101, rng);
    EXPECT_EQ(t.leaf_count(), 51u);
  }
}

TEST(Trees, Determinism) {
  for (std::uint64_t seed : {1ull, 99ull}) {
    Rng a(seed), b(seed);
    EXPECT_EQ(sample_conditioned(OffspringDistribution::geometric(), 500, a),
              sample_conditioned(OffspringDistribution::geometric(), 500, b));
    EXPECT_EQ(sample_unconditional(OffspringDistribution::catalan(), a, 1'000'000),
              sample_unconditional(OffspringDistribution::catalan(), b, 1'000'000));
  }
}

TEST(Trees, UnconditionalSmallSizes) {
  const auto d = OffspringDistribution::catalan();
  Rng rng(123);
  const int draws = 1'000'000;
  int single = 0, three = 0;
  for (int i = 0; i < draws; ++i) {
    try {
      const auto size = sample_unconditional(d, rng, 64).size();
      single += size == 1;
      three += size == 3;
    } catch (const CapExceeded&) {
    }
  }
  EXPECT_NEAR(static_cast<double>(single) / draws, 0.5, 0.003);
  EXPECT_NEAR(static_cast<double>(three) / draws, 0.125, 0.003);
}

TEST(Trees, CapExceededPropagates) {
  // Geometric trees exceed two nodes with probability 1 - 1/2 - 1/8 = 3/8.
  Rng rng(1);
  int thrown = 0;
  for (int i = 0; i < 1000; ++i) {
    try {
      sample_unconditional(OffspringDistribution::geometric(), rng, 2);
    } catch (const CapExceeded& e) {
      EXPECT_EQ(e.cap(), 2u);
      ++thrown;
    }
  }
  EXPECT_GT(thrown, 315);
  EXPECT_LT(thrown, 435);
}

TEST(Trees, HeightAtLeastMatchesFullTrees) {
  // Same draws, same answer.
  const auto d = OffspringDistribution::poisson();
  int oversized = 0;
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    Rng a(seed), b(seed);
    std::optional<OrderedTree> t;
    try {
      t = sample_unconditional(d, a, 1'000'000);
    } catch (const CapExceeded&) {
      ++oversized;
      continue;
    }
    EXPECT_EQ(sample_height_at_least(d, b, 6), height(*t) >= 6);
  }
  EXPECT_LE(oversized, 3);
}

TEST(Trees, GeometricHeightTail) {
  // Exact: Pr{height >= m} = 1/(m+1) for the critical geometric law.
  const auto d = OffspringDistribution::geometric();
  Rng rng(31337);
  const int draws = 1'000'000;
  const std::size_t m = 100;
  std::uint64_t tall = 0;
  for (int i = 0; i < draws; ++i) tall += sample_height_at_least(d, rng, m);
  const double scaled = 100.0 * static_cast<double>(tall) / draws;
  const double stderr_scaled = 100.0 * bernoulli_stderr(tall, draws);
  EXPECT_NEAR(scaled, 100.0 / 101.0, 4.0 * stderr_scaled);
  EXPECT_NEAR(d.height_tail(m), 1.0 / 101.0, 1e-12);
}

TEST(Trees, SpineGeneratorCatalan) {
  const auto d = OffspringDistribution::catalan();
  Rng rng(4);
  SpineGenerator spine(d, rng);
  for (int i = 0; i < 1000; ++i) {
    const SpineLevel level = spine.next();
    EXPECT_EQ(level.zeta, 2u);
    EXPECT_EQ(level.subtrees.size(), 1u);
    EXPECT_TRUE(level.marked_index == 1 || level.marked_index == 2);
  }
}

TEST(Trees, SpineGeneratorGeometric) {
  const auto d = OffspringDistribution::geometric();
  Rng rng(6);
  // Levels whose hanging trees hit the cap are skipped and counted.
  SpineGenerator spine(d, rng, 1'000'000);
  const int attempts = 20'000;
  int levels = 0, oversized = 0;
  double zeta_sum = 0.0;
  // marked index frequencies for zeta = 3
  std::vector<std::uint64_t> marked(3, 0);
  for (int i = 0; i < attempts; ++i) {
    SpineLevel level;
    try {
      level = spine.next();
    } catch (const CapExceeded&) {
      ++oversized;
      continue;
    }
    ++levels;
    ASSERT_EQ(level.subtrees.size(), level.zeta - 1);
    ASSERT_GE(level.marked_index, 1u);
    ASSERT_LE(level.marked_index, level.zeta);
    zeta_sum += level.zeta;
    if (level.zeta == 3) ++marked[level.marked_index - 1];
  }
  EXPECT_LE(oversized, 100);
  EXPECT_NEAR(zeta_sum / levels, 3.0, 0.06);
  EXPECT_GT(chi_square_uniformity(marked), 0.001);
}
