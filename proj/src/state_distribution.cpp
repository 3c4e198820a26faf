#include "gwrec/state_distribution.hpp"

#include <cmath>
#include <string>

#include "gwrec/errors.hpp"
#include "gwrec/numeric.hpp"
#include "gwrec/rng.hpp"

namespace gwrec {

StateDistribution::StateDistribution(std::vector<double> probs) : probs_(std::move(probs)) {
  if (probs_.empty()) throw InvalidDistribution("state distribution over an empty state space");
  CompensatedSum total;
  for (double p : probs_) {
    if (!std::isfinite(p) || p < 0.0) {
      throw InvalidDistribution("state probability " + std::to_string(p) + " is not in [0, 1]");
    }
    total += p;
  }
  if (std::abs(total.value() - 1.0) > kNormalizationTolerance) {
    throw InvalidDistribution("state probabilities sum to " + std::to_string(total.value()));
  }
}

StateDistribution StateDistribution::point_mass(std::size_t k, State s) {
  if (s >= k) throw DomainError("point mass outside the state space");
  std::vector<double> p(k, 0.0);
  p[s] = 1.0;
  return StateDistribution(std::move(p));
}

StateDistribution StateDistribution::uniform(std::size_t k) {
  return StateDistribution(std::vector<double>(k, 1.0 / static_cast<double>(k)));
}

StateDistribution StateDistribution::bernoulli(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("Bernoulli parameter outside [0, 1]");
  return StateDistribution({1.0 - p, p});
}

State StateDistribution::sample(Rng& rng) const {
  const double u = rng.uniform();
  double acc = 0.0;
  State last_positive = 0;
  for (State s = 0; s < probs_.size(); ++s) {
    if (probs_[s] <= 0.0) continue;
    acc += probs_[s];
    last_positive = s;
    if (u < acc) return s;
  }
  return last_positive;
}

double StateDistribution::mean() const {
  CompensatedSum m;
  for (std::size_t s = 0; s < probs_.size(); ++s) m += static_cast<double>(s) * probs_[s];
  return m.value();
}

}  // namespace gwrec
