#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <set>

#include "gwrec/errors.hpp"
#include "gwrec/examples.hpp"
#include "gwrec/stats.hpp"
#include "gwrec/tree.hpp"
#include "gwrec/wlaw.hpp"

using namespace gwrec;

namespace {

BuiltExample example(const std::string& name, nlohmann::json params = nlohmann::json::object()) {
  return build_example({name, std::move(params)});
}

std::vector<std::size_t> support_arities(const OffspringDistribution& d) {
  std::vector<std::size_t> out;
  for (std::size_t l = 0; l <= 5; ++l) {
    if (d.pmf(l) > 0.0) out.push_back(l);
  }
  return out;
}

// Law of f_l over independent children, by walking every tuple of child
// states and weighting the kernel with the product of their probabilities.
std::vector<double> enumerate_product(const RecursiveSpec& s, std::size_t arity,
                                      const std::vector<std::vector<double>>& laws) {
  const std::size_t k = s.state_count();
  std::vector<double> out(k, 0.0);
  std::vector<State> tuple(arity, 0);
  while (true) {
    double w = 1.0;
    for (std::size_t i = 0; i < arity; ++i) w *= laws[i][tuple[i]];
    if (w > 0.0) s.kernel(arity, tuple, w, out);
    std::size_t pos = 0;
    while (pos < arity && ++tuple[pos] == k) tuple[pos++] = 0;
    if (pos == arity) break;
  }
  return out;
}

std::vector<double> random_law(std::size_t k, Rng& rng) {
  std::vector<double> law(k);
  double total = 0.0;
  for (double& x : law) total += (x = -std::log(1.0 - rng.uniform()));
  for (double& x : law) x /= total;
  return law;
}

const char* const kKernelExamples[] = {"counting", "leaf_counter", "path_length", "transversal",
                                       "random_child", "minimax", "boolean_functions",
                                       "binary_subtree", "majority", "median"};

}  // namespace

TEST(Examples, KernelMatchesNodeFunction) {
  for (const char* name : kKernelExamples) {
    const BuiltExample e = example(name);
    const RecursiveSpec& s = e.spec;
    Rng rng(1);
    for (std::size_t arity : support_arities(e.offspring)) {
      for (int trial = 0; trial < 3; ++trial) {
        std::vector<State> children(arity);
        for (State& c : children) c = static_cast<State>(rng.below(s.state_count()));
        std::vector<double> exact(s.state_count(), 0.0);
        s.kernel(arity, children, 1.0, exact);
        EmpiricalDistribution counts(s.state_count());
        for (int i = 0; i < 100'000; ++i) counts.add(s.apply(arity, children, rng.uniform()));
        EXPECT_LE(tv_distance(counts.normalized().probs(), exact), 0.01) << name << " arity " << arity;
      }
    }
  }
}

TEST(Examples, ProductLawMatchesEnumeration) {
  for (const char* name : kKernelExamples) {
    const BuiltExample e = example(name);
    const RecursiveSpec& s = e.spec;
    Rng rng(2);
    for (std::size_t arity : support_arities(e.offspring)) {
      std::vector<std::vector<double>> laws;
      for (std::size_t i = 0; i < arity; ++i) laws.push_back(random_law(s.state_count(), rng));
      std::vector<std::span<const double>> views(laws.begin(), laws.end());
      const std::vector<double> fast = s.child_product_law(arity, views);
      const std::vector<double> slow = enumerate_product(s, arity, laws);
      for (std::size_t x = 0; x < s.state_count(); ++x) {
        EXPECT_NEAR(fast[x], slow[x], 1e-12) << name << " arity " << arity << " state " << x;
      }
    }
  }
}

TEST(Examples, PathLengthLimitIsAGeometricConvolution) {
  for (double p0 : {0.3, 0.5, 2.0 / 3.0}) {
    for (std::uint64_t i = 0; i < 20; ++i) {
      double convolution = 0.0;
      for (std::uint64_t j = 0; j <= i; ++j) {
        convolution += p0 * std::pow(1 - p0, static_cast<double>(j)) * p0 *
                       std::pow(1 - p0, static_cast<double>(i - j));
      }
      EXPECT_NEAR(path_length_limit_pmf(p0, i), convolution, 1e-14);
    }
    double total = 0.0;
    for (std::uint64_t i = 0; i < 400; ++i) total += path_length_limit_pmf(p0, i);
    EXPECT_NEAR(total, 1.0, 1e-12);
  }
  EXPECT_DOUBLE_EQ(path_length_limit_pmf(0.5, 0), 0.25);
  EXPECT_DOUBLE_EQ(path_length_limit_pmf(0.5, 1), 0.25);
  EXPECT_THROW(path_length_limit_pmf(0.0, 1), DomainError);
  EXPECT_THROW(path_length_limit_pmf(1.0, 1), DomainError);
}

TEST(Examples, TransversalEdgeCases) {
  const auto catalan = OffspringDistribution::catalan();
  const TransversalLimit none = transversal_rho_star(catalan, 0.0);
  EXPECT_EQ(none.rho_star, 0.0);
  EXPECT_NEAR(none.r, 0.0, 1e-12);
  const TransversalLimit all = transversal_rho_star(catalan, 1.0);
  EXPECT_NEAR(all.r, 1.0, 1e-12);
  EXPECT_NEAR(all.rho_star, 1.0, 1e-12);
  // Catalan at p = 1/2: r = 1/2 + (r^2 - 1)/4 has root 2 - sqrt(2).
  const TransversalLimit half = transversal_rho_star(catalan, 0.5);
  EXPECT_NEAR(half.r, 2 - std::sqrt(2.0), 1e-12);
  EXPECT_NEAR(half.rho_star, 0.5 / (1 - 0.5 * half.r), 1e-12);
  EXPECT_LT(half.residual, 1e-12);
  EXPECT_THROW(transversal_rho_star(catalan, 1.5), DomainError);
}

TEST(Examples, MinimaxLimits) {
  const auto catalan = OffspringDistribution::catalan();
  const MinimaxLimits symmetric = minimax_limits(catalan, 0.5, 0.5);
  EXPECT_NEAR(symmetric.p_star, 0.5, 1e-12);
  EXPECT_NEAR(symmetric.conditional_limit, 0.5, 1e-12);
  const MinimaxLimits top = minimax_limits(catalan, 1.0, 1.0);
  EXPECT_NEAR(top.p_star, 1.0, 1e-12);
  EXPECT_NEAR(top.conditional_limit, 1.0, 1e-12);
  EXPECT_FALSE(top.degenerate);
  EXPECT_THROW(minimax_limits(catalan, -0.1, 0.5), DomainError);
}

TEST(Examples, MajorityLimits) {
  const MajorityLimits symmetric = majority_limits(1, 0.5);
  EXPECT_NEAR(symmetric.p_star, 0.5, 1e-12);
  EXPECT_NEAR(symmetric.limit, 0.5, 1e-12);
  EXPECT_NEAR(symmetric.p01, 0.25, 1e-12);
  const MajorityLimits low = majority_limits(1, 1e-6);
  EXPECT_LT(low.p_star, 1e-5);
  EXPECT_LT(low.limit, 1e-9);
  const MajorityLimits two = majority_limits(2, 0.3);
  // p* solves x = (1/5) Pr{Bin(5, x) >= 3} + (4/5) 0.3.
  EXPECT_NEAR(two.p_star, 0.2 * binomial_tail(5, two.p_star, 3) + 0.8 * 0.3, 1e-12);
  EXPECT_NEAR(two.p01, binomial_tail(4, two.p_star, 3), 1e-12);
  EXPECT_THROW(majority_limits(0, 0.3), DomainError);
}

TEST(Examples, PairSelection) {
  EXPECT_EQ(binary_subtree_pair_selection(3, 0.0), std::make_pair(1u, 2u));
  EXPECT_EQ(binary_subtree_pair_selection(3, 0.5), std::make_pair(1u, 3u));
  EXPECT_EQ(binary_subtree_pair_selection(3, 0.99), std::make_pair(2u, 3u));
  EXPECT_EQ(binary_subtree_pair_selection(2, 0.7), std::make_pair(1u, 2u));
  EXPECT_THROW(binary_subtree_pair_selection(1, 0.5), DomainError);

  Rng rng(3);
  std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint64_t> freq;
  const int draws = 120'000;
  for (int i = 0; i < draws; ++i) ++freq[binary_subtree_pair_selection(4, rng.uniform())];
  ASSERT_EQ(freq.size(), 6u);
  for (const auto& [pair, count] : freq) {
    EXPECT_LT(pair.first, pair.second);
    EXPECT_NEAR(static_cast<double>(count) / draws, 1.0 / 6.0, 0.01);
  }
}

TEST(Examples, BooleanTruthTables) {
  const BuiltExample e = example("boolean_functions", {{"p", 1.0}});
  const RecursiveSpec& s = e.spec;
  ASSERT_EQ(s.state_count(), 4u);
  // Bit a of a table is the value at x1 = a.
  const State x1 = 2, not_x1 = 1;
  const State both[] = {x1, not_x1};
  EXPECT_EQ(s.apply(2, both, 0.3), 0u);
  const BuiltExample any = example("boolean_functions", {{"p", 0.0}});
  EXPECT_EQ(any.spec.apply(2, both, 0.3), 3u);
  EXPECT_NEAR(s.leaf_law()[x1], 0.5, 1e-15);
  EXPECT_NEAR(s.leaf_law()[not_x1], 0.5, 1e-15);
  EXPECT_EQ(example("boolean_functions", {{"k", 2}}).spec.state_count(), 16u);
  EXPECT_EQ(example("boolean_functions", {{"k", 3}}).spec.state_count(), 256u);
}

TEST(Examples, BooleanEveryFunctionHasPositiveMass) {
  for (int vars : {1, 2}) {
    const BuiltExample e = example("boolean_functions", {{"k", vars}});
    const WLawResult r = w_law_iterate(e.spec, e.offspring);
    ASSERT_TRUE(r.converged);
    for (State s = 0; s < e.spec.state_count(); ++s) EXPECT_GT(r.law[s], 0.0) << vars << " " << s;
  }
}

TEST(Examples, BinarySubtreeSizesAreOdd) {
  const BuiltExample e = example("binary_subtree", {{"k", 1 << 20}});
  Rng rng(4);
  for (int i = 0; i < 200; ++i) {
    const OrderedTree t = sample_conditioned(e.offspring, 301, rng);
    const State v = eval_root(e.spec, t, rng);
    EXPECT_EQ(v % 2, 1u);
    EXPECT_LE(v, t.size());
  }
}

TEST(Examples, LeafCounterCatalan) {
  const BuiltExample e = example("leaf_counter", {{"k", 1 << 20}});
  Rng rng(5);
  for (std::uint64_t n : {1, 3, 11, 101}) {
    const OrderedTree t = sample_conditioned(e.offspring, n, rng);
    EXPECT_EQ(eval_root(e.spec, t, rng), (n + 1) / 2);
  }
}

TEST(Examples, CountingIsExactModK) {
  const BuiltExample e = example("counting", {{"k", 7}});
  Rng rng(6);
  for (std::uint64_t n : {1, 13, 101}) {
    EXPECT_EQ(eval_root(e.spec, sample_conditioned(e.offspring, n, rng), rng), n % 7);
  }
  const BuiltExample capped = example("counting", {{"k", 7}, {"reduction", "min"}});
  EXPECT_EQ(eval_root(capped.spec, sample_conditioned(capped.offspring, 101, rng), rng), 6u);
}

TEST(Examples, ConfigErrors) {
  EXPECT_THROW(example("nonsense"), ConfigError);
  EXPECT_THROW(example("counting", {{"colour", 3}}), ConfigError);
  EXPECT_THROW(example("counting", {{"k", 0}}), ConfigError);
  EXPECT_THROW(example("counting", {{"k", 2.5}}), ConfigError);
  EXPECT_THROW(example("counting", {{"reduction", "floor"}}), ConfigError);
  EXPECT_THROW(example("transversal", {{"p", 1.5}}), ConfigError);
  EXPECT_THROW(example("transversal", {{"p", "half"}}), ConfigError);
  EXPECT_THROW(example("transversal", nlohmann::json::array()), ConfigError);
  EXPECT_THROW(example("transversal", {{"offspring", {{"kind", "binomial"}}}}), ConfigError);
  EXPECT_THROW(example("majority", {{"offspring", {{"kind", "catalan"}}}}), ConfigError);
  EXPECT_THROW(example("median", {{"offspring", {{"kind", "catalan"}}}}), ConfigError);
  EXPECT_THROW(example("median", {{"offspring", {{"kind", "geometric"}}}}), ConfigError);
  EXPECT_THROW(example("binary_subtree", {{"offspring", {{"kind", "catalan"}}}}), ConfigError);
  EXPECT_THROW(example("boolean_functions", {{"offspring", {{"kind", "geometric"}}}}), ConfigError);
  EXPECT_THROW(example("boolean_functions", {{"k", 4}}), ConfigError);
  try {
    example("minimax", {{"q", -1}});
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("minimax"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("q"), std::string::npos);
  }
}

TEST(Examples, KernelAvailability) {
  EXPECT_FALSE(example("boolean_functions", {{"k", 3}}).spec.has_kernel());
  EXPECT_FALSE(example("binary_subtree", {{"offspring", {{"kind", "poisson"}}}}).spec.has_kernel());
  EXPECT_TRUE(example("binary_subtree").spec.has_kernel());
  EXPECT_EQ(example("majority", {{"k", 2}}).offspring.pmf(5), 0.2);
}

TEST(Examples, Registry) {
  const auto& registry = example_registry();
  EXPECT_EQ(registry.size(), 10u);
  std::set<std::string> names;
  for (const ExampleInfo& info : registry) {
    names.insert(info.name);
    EXPECT_NO_THROW(example(info.name)) << info.name;
    EXPECT_FALSE(info.summary.empty());
    EXPECT_EQ(info.coalescent, info.name != "counting" && info.name != "leaf_counter");
  }
  EXPECT_EQ(names.size(), 10u);
}
