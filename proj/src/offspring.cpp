#include "gwrec/offspring.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "gwrec/errors.hpp"
#include "gwrec/numeric.hpp"

namespace gwrec {
namespace {

constexpr double kNormalizationTolerance = 1e-12;
constexpr double kCriticalityTolerance = 1e-9;
// Parametric sampling tables stop once the tail is far below 2^-53.
constexpr double kSamplingTail = 1e-20;
constexpr std::uint64_t kSeriesTermLimit = 100000;

void check_unit_interval(double s) {
  if (!(s >= 0.0 && s <= 1.0)) {
    throw DomainError("generating function argument " + std::to_string(s) + " outside [0, 1]");
  }
}

double geometric_pmf(std::uint64_t i) {
  return i > 1100 ? 0.0 : std::ldexp(1.0, -static_cast<int>(i) - 1);
}

double poisson_pmf(std::uint64_t i) {
  return std::exp(-1.0 - std::lgamma(static_cast<double>(i) + 1.0));
}

}  // namespace

OffspringDistribution::OffspringDistribution(OffspringKind kind, std::vector<double> p,
                                             double tail_tolerance)
    : kind_(kind), probs_(std::move(p)), tail_tolerance_(tail_tolerance) {
  if (!(tail_tolerance_ > 0.0 && tail_tolerance_ < 1.0)) {
    throw InvalidDistribution("tail tolerance must lie in (0, 1)");
  }
  switch (kind_) {
    case OffspringKind::geometric:
      variance_ = 2.0;
      break;
    case OffspringKind::poisson:
      variance_ = 1.0;
      break;
    case OffspringKind::explicit_support: {
      while (!probs_.empty() && probs_.back() == 0.0) probs_.pop_back();
      if (probs_.empty()) throw InvalidDistribution("offspring law has no mass");
      if (probs_.size() - 1 > kMaxExplicitIndex) {
        throw InvalidDistribution("explicit support exceeds index 2^32");
      }
      CompensatedSum total, first, second;
      for (std::size_t i = 0; i < probs_.size(); ++i) {
        const double p_i = probs_[i];
        if (!std::isfinite(p_i) || p_i < 0.0 || p_i > 1.0) {
          throw InvalidDistribution("p_" + std::to_string(i) + " = " + std::to_string(p_i) +
                                    " is not a probability");
        }
        const auto x = static_cast<double>(i);
        total += p_i;
        first += x * p_i;
        second += x * x * p_i;
      }
      if (std::abs(total.value() - 1.0) > kNormalizationTolerance) {
        throw InvalidDistribution("offspring probabilities sum to " +
                                  std::to_string(total.value()));
      }
      if (std::abs(first.value() - 1.0) > kCriticalityTolerance) {
        throw InvalidDistribution("offspring law is not critical: mean " +
                                  std::to_string(first.value()));
      }
      if (probs_.size() > 1 && probs_[1] == 1.0) {
        throw InvalidDistribution("p_1 = 1 (a path) is excluded");
      }
      variance_ = second.value() - first.value() * first.value();
      if (!(variance_ > 0.0)) throw InvalidDistribution("offspring variance must be positive");
      span_ = 0;
      for (std::size_t i = 1; i < probs_.size(); ++i) {
        if (probs_[i] > 0.0) span_ = std::gcd(span_, static_cast<std::uint32_t>(i));
      }
      break;
    }
  }

  CompensatedSum acc;
  if (finite_support()) {
    for (double p_i : probs_) {
      acc += p_i;
      cdf_.push_back(acc.value());
    }
  } else {
    for (std::uint64_t i = 0;; ++i) {
      acc += pmf(i);
      cdf_.push_back(acc.value());
      if (1.0 - acc.value() < kSamplingTail || i > 200) break;
    }
  }
}

OffspringDistribution OffspringDistribution::explicit_law(std::vector<double> p,
                                                          double tail_tolerance) {
  return OffspringDistribution(OffspringKind::explicit_support, std::move(p), tail_tolerance);
}

OffspringDistribution OffspringDistribution::geometric(double tail_tolerance) {
  return OffspringDistribution(OffspringKind::geometric, {}, tail_tolerance);
}

OffspringDistribution OffspringDistribution::poisson(double tail_tolerance) {
  return OffspringDistribution(OffspringKind::poisson, {}, tail_tolerance);
}

OffspringDistribution OffspringDistribution::catalan() { return explicit_law({0.5, 0.0, 0.5}); }

OffspringDistribution OffspringDistribution::zero_or(std::uint32_t children) {
  if (children < 2) throw InvalidDistribution("zero_or needs at least two children");
  std::vector<double> p(children + 1, 0.0);
  p[children] = 1.0 / children;
  p[0] = 1.0 - p[children];
  return explicit_law(std::move(p));
}

OffspringDistribution OffspringDistribution::from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string()) {
    throw ConfigError("offspring must be an object with a string \"kind\"");
  }
  const double tol = j.value("tail_tolerance", kDefaultTailTolerance);
  const auto kind = j["kind"].get<std::string>();
  if (kind == "geometric") return geometric(tol);
  if (kind == "poisson") return poisson(tol);
  if (kind == "catalan") return catalan();
  if (kind == "explicit") {
    if (!j.contains("p") || !j["p"].is_array()) {
      throw ConfigError("explicit offspring law needs an array \"p\"");
    }
    std::vector<double> p;
    for (const auto& x : j["p"]) {
      if (!x.is_number()) throw ConfigError("offspring probabilities must be numbers");
      p.push_back(x.get<double>());
    }
    return explicit_law(std::move(p), tol);
  }
  throw ConfigError("unknown offspring kind \"" + kind + "\"");
}

nlohmann::json OffspringDistribution::to_json() const {
  switch (kind_) {
    case OffspringKind::geometric:
      return {{"kind", "geometric"}};
    case OffspringKind::poisson:
      return {{"kind", "poisson"}};
    case OffspringKind::explicit_support:
      break;
  }
  return {{"kind", "explicit"}, {"p", probs_}};
}

double OffspringDistribution::pmf(std::uint64_t i) const {
  switch (kind_) {
    case OffspringKind::geometric:
      return geometric_pmf(i);
    case OffspringKind::poisson:
      return poisson_pmf(i);
    case OffspringKind::explicit_support:
      break;
  }
  return i < probs_.size() ? probs_[i] : 0.0;
}

double OffspringDistribution::gf(double s) const {
  check_unit_interval(s);
  switch (kind_) {
    case OffspringKind::geometric:
      return 1.0 / (2.0 - s);
    case OffspringKind::poisson:
      return std::exp(s - 1.0);
    case OffspringKind::explicit_support:
      break;
  }
  double acc = 0.0;
  for (auto it = probs_.rbegin(); it != probs_.rend(); ++it) acc = acc * s + *it;
  return acc;
}

double OffspringDistribution::gf_derivative(double s) const {
  check_unit_interval(s);
  switch (kind_) {
    case OffspringKind::geometric:
      return 1.0 / ((2.0 - s) * (2.0 - s));
    case OffspringKind::poisson:
      return std::exp(s - 1.0);
    case OffspringKind::explicit_support:
      break;
  }
  double acc = 0.0;
  for (std::size_t i = probs_.size() - 1; i >= 1; --i) {
    acc = acc * s + static_cast<double>(i) * probs_[i];
  }
  return acc;
}

double OffspringDistribution::gf_series(double s) const {
  check_unit_interval(s);
  CompensatedSum value, mass;
  double power = 1.0;
  for (std::uint64_t i = 0; i < kSeriesTermLimit; ++i) {
    const double p_i = pmf(i);
    value += p_i * power;
    mass += p_i;
    power *= s;
    if (finite_support() ? i + 1 >= probs_.size() : 1.0 - mass.value() < tail_tolerance_) break;
  }
  return value.value();
}

double OffspringDistribution::gf_derivative_series(double s) const {
  check_unit_interval(s);
  // Remaining terms are bounded by the remaining first moment, 1 - sum i p_i.
  CompensatedSum value, moment;
  double power = 1.0;
  for (std::uint64_t i = 1; i < kSeriesTermLimit; ++i) {
    const double weight = static_cast<double>(i) * pmf(i);
    value += weight * power;
    moment += weight;
    power *= s;
    if (finite_support() ? i + 1 >= probs_.size() : 1.0 - moment.value() < tail_tolerance_) break;
  }
  return value.value();
}

double OffspringDistribution::height_tail(std::uint64_t m) const {
  double extinct = 0.0;  // Pr{height < j} after j iterations
  for (std::uint64_t j = 0; j < m; ++j) extinct = gf(extinct);
  return 1.0 - extinct;
}

std::vector<double> OffspringDistribution::truncated_pmf(double mass_cutoff) const {
  if (finite_support()) return probs_;
  std::vector<double> out;
  CompensatedSum mass;
  for (std::uint64_t i = 0; i < 400; ++i) {
    const double p_i = pmf(i);
    out.push_back(p_i);
    mass += p_i;
    if (1.0 - mass.value() < mass_cutoff) break;
  }
  return out;
}

std::uint64_t OffspringDistribution::sample(Rng& rng) const {
  const double u = rng.uniform();
  const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
  if (it == cdf_.end()) return cdf_.size() - 1;  // rounding at the top of the table
  return static_cast<std::uint64_t>(it - cdf_.begin());
}

SizeBiasedDistribution::SizeBiasedDistribution(const OffspringDistribution& base) : base_(base) {
  CompensatedSum acc;
  cdf_.push_back(0.0);  // zeta >= 1
  const std::uint64_t last = base_.finite_support() ? base_.support_bound() : 400;
  for (std::uint64_t i = 1; i <= last; ++i) {
    acc += pmf(i);
    cdf_.push_back(acc.value());
    if (!base_.finite_support() && 1.0 - acc.value() < kSamplingTail) break;
  }
}

std::uint64_t SizeBiasedDistribution::sample(Rng& rng) const {
  const double u = rng.uniform();
  const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
  if (it == cdf_.end()) {
    // Rounding at the top of the table: return the largest index with mass.
    std::uint64_t i = cdf_.size() - 1;
    while (i > 1 && pmf(i) == 0.0) --i;
    return i;
  }
  return static_cast<std::uint64_t>(it - cdf_.begin());
}

std::vector<double> SizeBiasedDistribution::truncated_pmf(double mass_cutoff) const {
  std::vector<double> out{0.0};
  CompensatedSum mass;
  const std::uint64_t last = base_.finite_support() ? base_.support_bound() : 400;
  for (std::uint64_t i = 1; i <= last; ++i) {
    out.push_back(pmf(i));
    mass += out.back();
    if (!base_.finite_support() && 1.0 - mass.value() < mass_cutoff) break;
  }
  return out;
}

}  // namespace gwrec
