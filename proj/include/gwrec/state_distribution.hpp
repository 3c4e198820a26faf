#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace gwrec {

class Rng;

// Node values live in {0, ..., k-1}.
using State = std::uint32_t;

// Probability vector over {0, ..., k-1}. Entries are non-negative and sum to
// one within 1e-9; construction enforces both.
class StateDistribution {
 public:
  static constexpr double kNormalizationTolerance = 1e-9;

  explicit StateDistribution(std::vector<double> probs);

  static StateDistribution point_mass(std::size_t k, State s);
  static StateDistribution uniform(std::size_t k);
  static StateDistribution bernoulli(double p);

  std::size_t size() const noexcept { return probs_.size(); }
  double operator[](State s) const { return probs_[s]; }
  std::span<const double> probs() const noexcept { return probs_; }

  // Inversion sampling.
  State sample(Rng& rng) const;

  double mean() const;

 private:
  std::vector<double> probs_;
};

}  // namespace gwrec
