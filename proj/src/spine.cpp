#include "gwrec/spine.hpp"

#include <algorithm>
#include <cmath>

#include "gwrec/errors.hpp"
#include "gwrec/numeric.hpp"
#include "gwrec/parallel.hpp"
#include "gwrec/wlaw.hpp"

namespace gwrec {

StateMap StateMap::identity(std::size_t k) {
  std::vector<State> table(k);
  for (std::size_t x = 0; x < k; ++x) table[x] = static_cast<State>(x);
  return StateMap(std::move(table));
}

bool StateMap::is_constant() const {
  return std::all_of(table_.begin(), table_.end(), [&](State v) { return v == table_.front(); });
}

std::size_t StateMap::image_size() const {
  std::vector<State> image = table_;
  std::sort(image.begin(), image.end());
  return static_cast<std::size_t>(std::unique(image.begin(), image.end()) - image.begin());
}

StateMap StateMap::after(const StateMap& inner) const {
  if (inner.size() != size()) throw DimensionMismatch("composing maps on different state spaces");
  std::vector<State> table(size());
  for (std::size_t x = 0; x < size(); ++x) table[x] = table_[inner.table_[x]];
  return StateMap(std::move(table));
}

State UnmarkedValueSource::draw(const RecursiveSpec& spec, const OffspringDistribution& d,
                                Rng& rng) const {
  if (law_) return law_->sample(rng);
  const OrderedTree tree = sample_unconditional(d, rng, node_cap_);
  return eval_root(spec, tree, rng);
}

SpineStep sample_spine_step(const RecursiveSpec& spec, const SizeBiasedDistribution& zeta,
                            const OffspringDistribution& d, Rng& rng,
                            const UnmarkedValueSource& source) {
  SpineStep e;
  e.zeta = static_cast<std::uint32_t>(zeta.sample(rng));
  e.marked_index = static_cast<std::uint32_t>(rng.below(e.zeta)) + 1;
  e.u = rng.uniform();
  e.unmarked_values.reserve(e.zeta - 1);
  for (std::uint32_t j = 1; j < e.zeta; ++j) e.unmarked_values.push_back(source.draw(spec, d, rng));
  return e;
}

StateMap step_map(const RecursiveSpec& spec, const SpineStep& e) {
  const std::size_t k = spec.state_count();
  std::vector<State> children(e.zeta);
  const std::size_t marked = e.marked_index - 1;
  for (std::size_t slot = 0, j = 0; slot < e.zeta; ++slot) {
    if (slot != marked) children[slot] = e.unmarked_values[j++];
  }
  std::vector<State> table(k);
  for (State x = 0; x < k; ++x) {
    children[marked] = x;
    table[x] = spec.apply(e.zeta, children, e.u);
  }
  return StateMap(std::move(table));
}

CftpResult cftp_sample(const RecursiveSpec& spec, const OffspringDistribution& d, Rng& rng,
                       const UnmarkedValueSource& source, std::uint64_t max_levels) {
  const SizeBiasedDistribution zeta(d);
  StateMap composed = StateMap::identity(spec.state_count());
  for (std::uint64_t level = 0; level <= max_levels; ++level) {
    if (composed.is_constant()) return {composed(0), level};
    if (level == max_levels) break;
    const SpineStep e = sample_spine_step(spec, zeta, d, rng, source);
    composed = composed.after(step_map(spec, e));
  }
  throw NonCoalescent(max_levels, composed.image_size());
}

TransitionMatrix transition_matrix_exact(const RecursiveSpec& spec, const OffspringDistribution& d,
                                         const StateDistribution& w_law) {
  if (!spec.has_kernel()) throw NoKernel(spec.name() + " has no exact kernel");
  const std::size_t k = spec.state_count();
  if (w_law.size() != k) throw DimensionMismatch("W law does not match the state space");
  const std::vector<double> zeta = SizeBiasedDistribution(d).truncated_pmf(kZetaMassCutoff);

  std::vector<std::vector<double>> points(k, std::vector<double>(k, 0.0));
  for (std::size_t x = 0; x < k; ++x) points[x][x] = 1.0;

  TransitionMatrix p = TransitionMatrix::Zero(static_cast<Eigen::Index>(k),
                                              static_cast<Eigen::Index>(k));
  CompensatedSum mass;
  std::vector<std::span<const double>> laws;
  for (std::size_t z = 1; z < zeta.size(); ++z) {
    if (zeta[z] <= 0.0) continue;
    mass += zeta[z];
    const double weight = zeta[z] / static_cast<double>(z);
    for (std::size_t slot = 0; slot < z; ++slot) {
      for (std::size_t x = 0; x < k; ++x) {
        laws.assign(z, w_law.probs());
        laws[slot] = points[x];
        const std::vector<double> out = spec.child_product_law(z, laws);
        for (std::size_t y = 0; y < k; ++y) {
          p(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(y)) += weight * out[y];
        }
      }
    }
  }
  return p / mass.value();
}

TransitionMatrix transition_matrix_exact(const RecursiveSpec& spec, const OffspringDistribution& d) {
  return transition_matrix_exact(spec, d, w_law_iterate(spec, d).law);
}

TransitionMatrix transition_matrix_mc(const RecursiveSpec& spec, const OffspringDistribution& d,
                                      std::uint64_t samples, Rng& rng,
                                      const UnmarkedValueSource& source) {
  if (samples == 0) throw DomainError("transition matrix estimate needs at least one sample");
  const SizeBiasedDistribution zeta(d);
  const auto k = static_cast<Eigen::Index>(spec.state_count());
  Eigen::MatrixXd counts = Eigen::MatrixXd::Zero(k, k);
  for (std::uint64_t i = 0; i < samples; ++i) {
    const StateMap map = step_map(spec, sample_spine_step(spec, zeta, d, rng, source));
    for (Eigen::Index x = 0; x < k; ++x) counts(x, map(static_cast<State>(x))) += 1.0;
  }
  return counts / static_cast<double>(samples);
}

StateDistribution stationary_distribution(const TransitionMatrix& p) {
  const Eigen::Index k = p.rows();
  if (k == 0 || p.cols() != k) throw DimensionMismatch("transition matrix must be square");
  if (k == 1) return StateDistribution({1.0});
  Eigen::MatrixXd a = p.transpose() - Eigen::MatrixXd::Identity(k, k);
  Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
  lu.setThreshold(1e-10);
  if (lu.rank() < k - 1) {
    throw NotUnique("stationary law is not unique: " + std::to_string(k - lu.rank()) +
                    " independent solutions");
  }
  // The rows of a sum to zero, so one may be replaced by the normalization.
  a.row(k - 1).setOnes();
  Eigen::VectorXd b = Eigen::VectorXd::Zero(k);
  b(k - 1) = 1.0;
  Eigen::VectorXd pi = a.fullPivLu().solve(b);
  for (Eigen::Index i = 0; i < k; ++i) {
    if (pi(i) < -1e-12) throw DomainError("stationary solve produced a negative probability");
    pi(i) = std::max(0.0, pi(i));
  }
  pi /= pi.sum();
  const double residual = (pi.transpose() * p - pi.transpose()).cwiseAbs().sum();
  if (!(residual < 1e-10)) {
    throw DomainError("stationary residual " + std::to_string(residual) + " exceeds 1e-10");
  }
  return StateDistribution(std::vector<double>(pi.data(), pi.data() + k));
}

double SurvivalCurve::survival(std::uint64_t t) const {
  return static_cast<double>(still_running.at(t)) / static_cast<double>(reps);
}

double SurvivalCurve::stderr_at(std::uint64_t t) const {
  const double s = survival(t);
  return std::sqrt(s * (1.0 - s) / static_cast<double>(reps));
}

SurvivalCurve coalescence_probe(const RecursiveSpec& spec, const OffspringDistribution& d,
                                std::uint64_t t_max, std::uint64_t reps, std::uint64_t seed,
                                const UnmarkedValueSource& source, unsigned threads) {
  const SizeBiasedDistribution zeta(d);
  // Coalescence level per replicate; t_max + 1 when it never happened.
  const auto levels = run_indexed(reps, threads, [&](std::uint64_t r) {
    Rng rng = Rng::substream(seed, r);
    StateMap composed = StateMap::identity(spec.state_count());
    for (std::uint64_t t = 0; t <= t_max; ++t) {
      if (composed.is_constant()) return t;
      if (t == t_max) break;
      composed = composed.after(step_map(spec, sample_spine_step(spec, zeta, d, rng, source)));
    }
    return t_max + 1;
  });
  SurvivalCurve curve{reps, std::vector<std::uint64_t>(t_max + 1, 0)};
  for (std::uint64_t tau : levels) {
    for (std::uint64_t t = 0; t < std::min(tau, t_max + 1); ++t) ++curve.still_running[t];
  }
  return curve;
}

}  // namespace gwrec
