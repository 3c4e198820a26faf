#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "gwrec/state_distribution.hpp"

namespace gwrec {

// Counts over {0, ..., k-1}. Two instances merge by adding counts, so
// replicate batches can be combined in any grouping.
class EmpiricalDistribution {
 public:
  explicit EmpiricalDistribution(std::size_t k) : counts_(k, 0) {}

  void add(State s, std::uint64_t times = 1);
  void merge(const EmpiricalDistribution& other);

  std::size_t size() const noexcept { return counts_.size(); }
  std::uint64_t total() const noexcept { return total_; }
  std::uint64_t count(State s) const { return counts_.at(s); }
  std::span<const std::uint64_t> counts() const noexcept { return counts_; }
  double frequency(State s) const;

  // Throws DomainError when empty.
  StateDistribution normalized() const;

  // "state,count,prob" header plus one row per state.
  std::string to_csv() const;

 private:
  std::vector<std::uint64_t> counts_;
  std::uint64_t total_ = 0;
};

// Half the L1 distance. Throws DimensionMismatch on different sizes.
double tv_distance(std::span<const double> a, std::span<const double> b);
double tv_distance(const StateDistribution& a, const StateDistribution& b);

// Survival function of the chi-square law with `dof` degrees of freedom,
// via the regularized upper incomplete gamma function.
double chi_square_survival(double statistic, double dof);

// Pearson goodness-of-fit p-value against the uniform law on the cells.
double chi_square_uniformity(std::span<const std::uint64_t> counts);

// Pearson goodness-of-fit p-value against `expected` probabilities. Cells
// with zero expected mass must have zero counts (else p = 0).
double chi_square_gof(std::span<const std::uint64_t> counts, std::span<const double> expected);

double binomial_pmf(std::uint64_t n, double p, std::uint64_t j);
// Pr{Binomial(n, p) >= j}.
double binomial_tail(std::uint64_t n, double p, std::uint64_t j);

struct Interval {
  double lo;
  double hi;
};

// Wilson score interval for a Bernoulli proportion.
Interval wilson_interval(std::uint64_t successes, std::uint64_t trials, double z = 1.959963984540054);

// sqrt(p(1-p)/n) at the Wilson center, so it stays positive at p_hat in {0, 1}.
double bernoulli_stderr(std::uint64_t successes, std::uint64_t trials);

// Formats a double with the shortest round-trip representation.
std::string format_double(double x);

}  // namespace gwrec
