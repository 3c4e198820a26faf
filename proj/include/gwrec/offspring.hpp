#pragma once

#include <cstdint>
#include <vector>

#include <nlohmann/json.hpp>

#include "gwrec/rng.hpp"

namespace gwrec {

enum class OffspringKind { explicit_support, geometric, poisson };

// Law of the offspring count of a critical Galton-Watson tree.
//
// Three kinds are supported: an explicit finite pmf, the unique critical
// geometric law p_i = 2^-(i+1) and Poisson(1). Construction validates
// normalization (1e-12), criticality (mean 1 within 1e-9) and positive
// variance; nothing is renormalized.
//
// Immutable after construction. Sampling takes the caller's Rng.
class OffspringDistribution {
 public:
  static constexpr double kDefaultTailTolerance = 1e-12;
  static constexpr std::uint64_t kMaxExplicitIndex = std::uint64_t{1} << 32;

  static OffspringDistribution explicit_law(std::vector<double> p,
                                            double tail_tolerance = kDefaultTailTolerance);
  static OffspringDistribution geometric(double tail_tolerance = kDefaultTailTolerance);
  static OffspringDistribution poisson(double tail_tolerance = kDefaultTailTolerance);

  // p0 = p2 = 1/2 (binary Catalan trees).
  static OffspringDistribution catalan();
  // p0 = 2k/(2k+1), p_{2k+1} = 1/(2k+1); the only critical law on {0, 2k+1}.
  static OffspringDistribution zero_or(std::uint32_t children);

  // {"kind":"explicit","p":[...]}, {"kind":"geometric"}, {"kind":"poisson"}.
  // "tail_tolerance" is optional. Throws ConfigError on a malformed object.
  static OffspringDistribution from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;

  OffspringKind kind() const noexcept { return kind_; }
  bool finite_support() const noexcept { return kind_ == OffspringKind::explicit_support; }
  double tail_tolerance() const noexcept { return tail_tolerance_; }

  double pmf(std::uint64_t i) const;
  double mean() const noexcept { return 1.0; }
  double variance() const noexcept { return variance_; }

  // gcd{i >= 1 : p_i > 0}; 1 for the parametric kinds.
  std::uint32_t span() const noexcept { return span_; }

  // Generating function and its derivative on [0, 1]. Closed forms are used
  // for the parametric kinds; the *_series variants always sum the power
  // series, stopping once the remaining mass bound drops below
  // tail_tolerance. DomainError outside [0, 1].
  double gf(double s) const;
  double gf_derivative(double s) const;
  double gf_series(double s) const;
  double gf_derivative_series(double s) const;

  // Pr{height(T) >= m} = 1 - g^{(m)}(0) for the unconditional tree.
  double height_tail(std::uint64_t m) const;

  // p_0, ..., p_I where I is the last index of an explicit law, or the first
  // index whose remaining tail mass is below `mass_cutoff` for parametric ones.
  std::vector<double> truncated_pmf(double mass_cutoff) const;

  // Largest index with positive probability (explicit) or the sampling table
  // bound (parametric).
  std::uint64_t support_bound() const noexcept { return cdf_.size() - 1; }

  std::uint64_t sample(Rng& rng) const;

 private:
  OffspringDistribution(OffspringKind kind, std::vector<double> p, double tail_tolerance);

  OffspringKind kind_;
  std::vector<double> probs_;  // explicit kind only
  std::vector<double> cdf_;    // inversion table
  double tail_tolerance_;
  double variance_ = 0.0;
  std::uint32_t span_ = 1;
};

// Size-biased companion: Pr{zeta = i} = i p_i, i >= 1. This is the law of the
// number of children of a spine node in Kesten's tree; E[zeta] = 1 + sigma^2.
class SizeBiasedDistribution {
 public:
  explicit SizeBiasedDistribution(const OffspringDistribution& base);

  double pmf(std::uint64_t i) const { return static_cast<double>(i) * base_.pmf(i); }
  double mean() const noexcept { return 1.0 + base_.variance(); }
  std::uint64_t sample(Rng& rng) const;

  // Pr{zeta = 1}, ..., Pr{zeta = I}, cut where the remaining mass is below
  // `mass_cutoff` (index 0 holds 0).
  std::vector<double> truncated_pmf(double mass_cutoff) const;

 private:
  OffspringDistribution base_;
  std::vector<double> cdf_;
};

}  // namespace gwrec
