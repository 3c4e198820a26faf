#include "gwrec/stats.hpp"

#include <charconv>
#include <cmath>
#include <limits>

#include <boost/math/special_functions/gamma.hpp>

#include "gwrec/errors.hpp"
#include "gwrec/numeric.hpp"

namespace gwrec {

void EmpiricalDistribution::add(State s, std::uint64_t times) {
  if (s >= counts_.size()) throw DomainError("state outside the empirical distribution");
  counts_[s] += times;
  total_ += times;
}

void EmpiricalDistribution::merge(const EmpiricalDistribution& other) {
  if (other.size() != size()) throw DimensionMismatch("cannot merge distributions of different size");
  for (std::size_t s = 0; s < counts_.size(); ++s) counts_[s] += other.counts_[s];
  total_ += other.total_;
}

double EmpiricalDistribution::frequency(State s) const {
  return total_ ? static_cast<double>(count(s)) / static_cast<double>(total_) : 0.0;
}

StateDistribution EmpiricalDistribution::normalized() const {
  if (total_ == 0) throw DomainError("empty empirical distribution");
  std::vector<double> p(counts_.size());
  for (std::size_t s = 0; s < p.size(); ++s) p[s] = frequency(static_cast<State>(s));
  return StateDistribution(std::move(p));
}

std::string EmpiricalDistribution::to_csv() const {
  std::string out = "state,count,prob\n";
  for (std::size_t s = 0; s < counts_.size(); ++s) {
    out += std::to_string(s) + ',' + std::to_string(counts_[s]) + ',' +
           format_double(frequency(static_cast<State>(s))) + '\n';
  }
  return out;
}

double tv_distance(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw DimensionMismatch("total variation between laws on " + std::to_string(a.size()) +
                            " and " + std::to_string(b.size()) + " states");
  }
  CompensatedSum sum;
  for (std::size_t i = 0; i < a.size(); ++i) sum += std::abs(a[i] - b[i]);
  return 0.5 * sum.value();
}

double tv_distance(const StateDistribution& a, const StateDistribution& b) {
  return tv_distance(a.probs(), b.probs());
}

double chi_square_survival(double statistic, double dof) {
  if (statistic <= 0.0) return 1.0;
  return boost::math::gamma_q(0.5 * dof, 0.5 * statistic);
}

double chi_square_gof(std::span<const std::uint64_t> counts, std::span<const double> expected) {
  if (counts.size() != expected.size()) throw DimensionMismatch("counts and expected law differ in size");
  std::uint64_t total = 0;
  for (auto c : counts) total += c;
  if (total == 0) throw DomainError("chi-square test on zero observations");
  CompensatedSum stat;
  std::size_t cells = 0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    const double e = expected[i] * static_cast<double>(total);
    if (e <= 0.0) {
      if (counts[i] > 0) return 0.0;
      continue;
    }
    const double diff = static_cast<double>(counts[i]) - e;
    stat += diff * diff / e;
    ++cells;
  }
  if (cells < 2) return 1.0;
  return chi_square_survival(stat.value(), static_cast<double>(cells - 1));
}

double chi_square_uniformity(std::span<const std::uint64_t> counts) {
  const std::vector<double> uniform(counts.size(), 1.0 / static_cast<double>(counts.size()));
  return chi_square_gof(counts, uniform);
}

double binomial_pmf(std::uint64_t n, double p, std::uint64_t j) {
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("binomial parameter outside [0, 1]");
  if (j > n) return 0.0;
  if (p == 0.0) return j == 0 ? 1.0 : 0.0;
  if (p == 1.0) return j == n ? 1.0 : 0.0;
  const auto nn = static_cast<double>(n);
  const auto jj = static_cast<double>(j);
  const double log_choose = std::lgamma(nn + 1.0) - std::lgamma(jj + 1.0) - std::lgamma(nn - jj + 1.0);
  return std::exp(log_choose + jj * std::log(p) + (nn - jj) * std::log1p(-p));
}

double binomial_tail(std::uint64_t n, double p, std::uint64_t j) {
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("binomial parameter outside [0, 1]");
  CompensatedSum tail;
  for (std::uint64_t i = j; i <= n; ++i) tail += binomial_pmf(n, p, i);
  return std::min(1.0, tail.value());
}

Interval wilson_interval(std::uint64_t successes, std::uint64_t trials, double z) {
  if (trials == 0) throw DomainError("Wilson interval needs at least one trial");
  const auto n = static_cast<double>(trials);
  const double phat = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double center = (phat + z2 / (2 * n)) / (1 + z2 / n);
  const double half = z / (1 + z2 / n) * std::sqrt(phat * (1 - phat) / n + z2 / (4 * n * n));
  return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

double bernoulli_stderr(std::uint64_t successes, std::uint64_t trials) {
  if (trials == 0) throw DomainError("standard error needs at least one trial");
  const auto n = static_cast<double>(trials);
  const double z2 = 1.959963984540054 * 1.959963984540054;
  const double center = (static_cast<double>(successes) + z2 / 2) / (n + z2);
  return std::sqrt(center * (1 - center) / n);
}

std::string format_double(double x) {
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
  if (ec != std::errc{}) return "nan";
  return std::string(buf, end);
}

}  // namespace gwrec
