#pragma once

#include <cstdint>
#include <utility>

#include <Eigen/Core>

namespace gsgdm {

/// Deterministic SplitMix64 stream. Every stochastic component draws from one
/// of these so that two formulations run with the same seed see the same noise.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed = 0) noexcept : state_(seed) {}

  /// Advance by the golden-ratio increment and return the finalized word.
  std::uint64_t next() noexcept;

  /// (word >> 11) * 2^-53, in [0, 1).
  double uniform() noexcept;

  /// Box-Muller pair from u1 = 1 - uniform() in (0, 1] and u2 = uniform().
  /// Consumes exactly two words.
  std::pair<double, double> gaussian_pair() noexcept;

  /// Fill `out` with i.i.d. N(0, stddev^2) draws, ceil(n/2) pairs; the second
  /// value of the last pair is discarded when n is odd.
  void fill_gaussian(Eigen::Ref<Eigen::VectorXd> out, double stddev = 1.0) noexcept;

  /// Uniform index in [0, n).
  std::size_t index(std::size_t n) noexcept;

  std::uint64_t state() const noexcept { return state_; }

  /// Independent stream for run `index` of an experiment seeded with `seed`:
  /// the state is the first SplitMix64 word of (seed xor index).
  static RngStream derive(std::uint64_t seed, std::uint64_t index) noexcept;

 private:
  std::uint64_t state_;
};

/// The Box-Muller map on explicit uniforms, u1 in (0, 1], u2 in [0, 1).
std::pair<double, double> box_muller(double u1, double u2) noexcept;

}  // namespace gsgdm
