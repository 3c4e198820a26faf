#include "gwrec/tree.hpp"

#include <algorithm>
#include <charconv>
#include <random>

#include "gwrec/errors.hpp"

namespace gwrec {

bool is_lukasiewicz(std::span<const std::uint32_t> offspring) {
  if (offspring.empty()) return false;
  std::int64_t walk = 0;
  for (std::size_t i = 0; i < offspring.size(); ++i) {
    walk += static_cast<std::int64_t>(offspring[i]) - 1;
    const bool last = i + 1 == offspring.size();
    if (last ? walk != -1 : walk < 0) return false;
  }
  return true;
}

OrderedTree::OrderedTree(std::vector<std::uint32_t> offspring) : offspring_(std::move(offspring)) {
  if (!is_lukasiewicz(offspring_)) {
    throw InvalidTree("offspring sequence is not the preorder code of a finite tree");
  }
}

std::size_t OrderedTree::leaf_count() const {
  return static_cast<std::size_t>(std::count(offspring_.begin(), offspring_.end(), 0u));
}

std::string OrderedTree::to_string() const {
  std::string out;
  out.reserve(offspring_.size() * 2);
  for (std::size_t i = 0; i < offspring_.size(); ++i) {
    if (i) out.push_back(' ');
    out += std::to_string(offspring_[i]);
  }
  return out;
}

OrderedTree OrderedTree::parse(std::string_view line) {
  std::vector<std::uint32_t> counts;
  const char* p = line.data();
  const char* end = p + line.size();
  while (p < end) {
    if (*p == ' ' || *p == '\t' || *p == '\r' || *p == '\n') {
      ++p;
      continue;
    }
    std::uint32_t value = 0;
    const auto [next, ec] = std::from_chars(p, end, value);
    if (ec != std::errc{}) {
      throw InvalidTree("cannot parse offspring count near \"" +
                        std::string(p, std::min<std::size_t>(end - p, 16)) + "\"");
    }
    counts.push_back(value);
    p = next;
  }
  return OrderedTree(std::move(counts));
}

std::size_t height(const OrderedTree& tree) {
  // pending[d] = children of the open node at depth d not yet finished.
  std::vector<std::uint32_t> pending;
  std::size_t h = 0;
  for (std::uint32_t c : tree.offspring()) {
    h = std::max(h, pending.size());
    if (c > 0) {
      pending.push_back(c);
      continue;
    }
    while (!pending.empty() && --pending.back() == 0) pending.pop_back();
  }
  return h;
}

OrderedTree sample_unconditional(const OffspringDistribution& d, Rng& rng,
                                 std::uint64_t node_cap) {
  std::vector<std::uint32_t> offspring;
  // Nodes generated but not yet visited; the Lukasiewicz walk plus one.
  std::uint64_t open = 1;
  while (open > 0) {
    if (offspring.size() >= node_cap) throw CapExceeded(node_cap);
    const auto c = static_cast<std::uint32_t>(d.sample(rng));
    offspring.push_back(c);
    open += c;
    --open;
  }
  return OrderedTree(OrderedTree::Trusted{}, std::move(offspring));
}

bool sample_height_at_least(const OffspringDistribution& d, Rng& rng, std::size_t m,
                            std::uint64_t node_cap) {
  if (m == 0) return true;
  std::vector<std::uint32_t> pending;
  std::uint64_t nodes = 0;
  do {
    if (pending.size() >= m) return true;
    if (nodes++ >= node_cap) throw CapExceeded(node_cap);
    const auto c = static_cast<std::uint32_t>(d.sample(rng));
    if (c > 0) {
      pending.push_back(c);
      continue;
    }
    while (!pending.empty() && --pending.back() == 0) pending.pop_back();
  } while (!pending.empty());
  return false;
}

std::size_t cycle_lemma_start(std::span<const std::uint32_t> offspring) {
  std::int64_t walk = 0;
  std::int64_t best = 1;
  std::size_t start = 0;
  for (std::size_t i = 0; i < offspring.size(); ++i) {
    walk += static_cast<std::int64_t>(offspring[i]) - 1;
    if (walk < best) {
      best = walk;
      start = i + 1;
    }
  }
  return start % offspring.size();
}

OrderedTree sample_conditioned(const OffspringDistribution& d, std::uint64_t n, Rng& rng) {
  if (n < 1) throw InvalidSize("conditioned tree size must be at least 1");
  if ((n - 1) % d.span() != 0) {
    throw SpanMismatch("tree size " + std::to_string(n) + " is not 1 mod span " +
                       std::to_string(d.span()));
  }
  const std::uint64_t target = n - 1;
  std::vector<std::uint32_t> offspring;
  offspring.reserve(n);

  if (d.finite_support()) {
    const std::vector<double> p = d.truncated_pmf(0.0);
    std::vector<std::uint64_t> counts(p.size());
    for (;;) {
      // Multinomial(n, p) through conditional binomials.
      std::uint64_t remaining = n;
      double remaining_mass = 1.0;
      std::uint64_t sum = 0;
      for (std::size_t i = 0; i < p.size(); ++i) {
        std::uint64_t c = 0;
        if (remaining > 0 && p[i] > 0.0) {
          if (i + 1 == p.size() || p[i] >= remaining_mass) {
            c = remaining;
          } else {
            std::binomial_distribution<std::uint64_t> binom(remaining, p[i] / remaining_mass);
            c = binom(rng);
          }
        }
        counts[i] = c;
        remaining -= c;
        remaining_mass -= p[i];
        sum += c * i;
      }
      if (sum == target) break;
    }
    for (std::size_t i = 0; i < counts.size(); ++i) {
      offspring.insert(offspring.end(), counts[i], static_cast<std::uint32_t>(i));
    }
    for (std::size_t i = offspring.size() - 1; i > 0; --i) {
      std::swap(offspring[i], offspring[rng.below(i + 1)]);
    }
  } else {
    for (;;) {
      offspring.clear();
      std::uint64_t sum = 0;
      for (std::uint64_t i = 0; i < n && sum <= target; ++i) {
        const auto c = static_cast<std::uint32_t>(d.sample(rng));
        offspring.push_back(c);
        sum += c;
      }
      if (offspring.size() == n && sum == target) break;
    }
  }

  std::rotate(offspring.begin(), offspring.begin() + cycle_lemma_start(offspring),
              offspring.end());
  return OrderedTree(OrderedTree::Trusted{}, std::move(offspring));
}

SpineLevel SpineGenerator::next() {
  SpineLevel level;
  level.zeta = static_cast<std::uint32_t>(size_biased_.sample(rng_));
  level.marked_index = static_cast<std::uint32_t>(rng_.below(level.zeta)) + 1;
  level.subtrees.reserve(level.zeta - 1);
  for (std::uint32_t j = 1; j < level.zeta; ++j) {
    level.subtrees.push_back(sample_unconditional(offspring_, rng_, node_cap_));
  }
  return level;
}

}  // namespace gwrec
