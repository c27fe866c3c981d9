#include "gsgdm/rng.hpp"

#include <cmath>
#include <numbers>

namespace gsgdm {

std::uint64_t RngStream::next() noexcept {
  state_ += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = state_;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double RngStream::uniform() noexcept {
  return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

std::pair<double, double> RngStream::gaussian_pair() noexcept {
  const double u1 = 1.0 - uniform();
  const double u2 = uniform();
  return box_muller(u1, u2);
}

void RngStream::fill_gaussian(Eigen::Ref<Eigen::VectorXd> out, double stddev) noexcept {
  const Eigen::Index n = out.size();
  for (Eigen::Index i = 0; i < n; i += 2) {
    const auto [z1, z2] = gaussian_pair();
    out[i] = stddev * z1;
    if (i + 1 < n) out[i + 1] = stddev * z2;
  }
}

std::size_t RngStream::index(std::size_t n) noexcept {
  const auto i = static_cast<std::size_t>(uniform() * static_cast<double>(n));
  return i < n ? i : n - 1;
}

RngStream RngStream::derive(std::uint64_t seed, std::uint64_t index) noexcept {
  RngStream mixer(seed ^ index);
  return RngStream(mixer.next());
}

std::pair<double, double> box_muller(double u1, double u2) noexcept {
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  return {radius * std::cos(angle), radius * std::sin(angle)};
}

}  // namespace gsgdm
