#pragma once

#include <cstdint>
#include <random>

namespace gwrec {

// splitmix64 finalizer; used to derive replicate seeds.
std::uint64_t mix64(std::uint64_t x) noexcept;

// Seed of replicate `index` under `master`. Stable across versions:
// mix64(mix64(master) ^ (index * 0x9e3779b97f4a7c15 + 1)).
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) noexcept;

// Seeded generator used by every sampler. Wraps std::mt19937_64 and converts
// to doubles with a fixed bit recipe so streams are reproducible. Satisfies
// UniformRandomBitGenerator. Counts raw 64-bit draws, which tests use to
// check how much randomness an operation consumes.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  static Rng substream(std::uint64_t master, std::uint64_t index) {
    return Rng(derive_seed(master, index));
  }

  static constexpr result_type min() { return std::mt19937_64::min(); }
  static constexpr result_type max() { return std::mt19937_64::max(); }

  result_type operator()() {
    ++draws_;
    return engine_();
  }

  // Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  // Uniform integer on [0, n), unbiased (Lemire's method). n > 0.
  std::uint64_t below(std::uint64_t n);

  bool bernoulli(double p) { return uniform() < p; }

  std::uint64_t draws() const noexcept { return draws_; }

 private:
  std::mt19937_64 engine_;
  std::uint64_t draws_ = 0;
};

// Maps u in [0,1) to an index in [0, m): floor(u*m) clamped to m-1.
inline std::size_t uniform_index(double u, std::size_t m) {
  auto i = static_cast<std::size_t>(u * static_cast<double>(m));
  return i < m ? i : m - 1;
}

}  // namespace gwrec
