#include "gwrec/wlaw.hpp"

#include <algorithm>

#include "gwrec/errors.hpp"
#include "gwrec/numeric.hpp"
#include "gwrec/parallel.hpp"
#include "gwrec/tree.hpp"

namespace gwrec {
namespace {

constexpr std::uint64_t kBatchSize = 4096;

}  // namespace

StateDistribution apply_distributional_map(const RecursiveSpec& spec,
                                           const OffspringDistribution& d,
                                           const StateDistribution& mu, double mass_cutoff) {
  if (mu.size() != spec.state_count()) throw DimensionMismatch("law does not match the state space");
  const std::size_t k = spec.state_count();
  const std::vector<double> p = d.truncated_pmf(mass_cutoff);
  std::vector<CompensatedSum> acc(k);
  CompensatedSum mass;
  std::vector<std::span<const double>> laws;
  for (std::size_t arity = 0; arity < p.size(); ++arity) {
    if (p[arity] <= 0.0) continue;
    laws.assign(arity, mu.probs());
    const std::vector<double> out = spec.child_product_law(arity, laws);
    for (std::size_t s = 0; s < k; ++s) acc[s] += p[arity] * out[s];
    mass += p[arity];
  }
  // Renormalize the (at most mass_cutoff) mass lost to truncation.
  std::vector<double> next(k);
  for (std::size_t s = 0; s < k; ++s) next[s] = std::max(0.0, acc[s].value() / mass.value());
  return StateDistribution(std::move(next));
}

WLawResult w_law_iterate(const RecursiveSpec& spec, const OffspringDistribution& d,
                         const WLawOptions& options) {
  if (!spec.has_kernel()) throw NoKernel(spec.name() + " has no exact kernel");
  const double cutoff = options.tol / 10.0;
  StateDistribution mu = spec.leaf_law();
  double step = 1.0;
  std::uint64_t m = 0;
  while (m < options.max_depth) {
    StateDistribution next = apply_distributional_map(spec, d, mu, cutoff);
    step = tv_distance(next, mu);
    mu = std::move(next);
    ++m;
    if (step < options.tol) break;
  }
  return WLawResult{std::move(mu), m, step, step < options.tol, d.height_tail(m)};
}

WLawSample w_law_monte_carlo(const RecursiveSpec& spec, const OffspringDistribution& d,
                             std::uint64_t samples, std::uint64_t seed,
                             const MonteCarloOptions& options) {
  struct Batch {
    EmpiricalDistribution counts;
    std::uint64_t discarded;
  };
  const std::uint64_t batches = (samples + kBatchSize - 1) / kBatchSize;
  auto results = run_indexed(batches, options.threads, [&](std::uint64_t b) {
    Rng rng(derive_seed(seed, b));
    Batch batch{EmpiricalDistribution(spec.state_count()), 0};
    const std::uint64_t size = std::min(kBatchSize, samples - b * kBatchSize);
    for (std::uint64_t j = 0; j < size; ++j) {
      try {
        const OrderedTree tree = sample_unconditional(d, rng, options.node_cap);
        batch.counts.add(eval_root(spec, tree, rng));
      } catch (const CapExceeded&) {
        if (options.cap_policy == CapPolicy::propagate) throw CapExceeded(options.node_cap, j + 1);
        ++batch.discarded;
      }
    }
    return batch;
  });
  WLawSample out{EmpiricalDistribution(spec.state_count()), 0};
  for (const auto& batch : results) {
    out.counts.merge(batch.counts);
    out.discarded += batch.discarded;
  }
  return out;
}

}  // namespace gwrec
