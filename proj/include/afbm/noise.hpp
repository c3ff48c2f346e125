#ifndef AFBM_NOISE_HPP
#define AFBM_NOISE_HPP

#include <cmath>
#include <complex>
#include <cstdint>
#include <string_view>

#include "afbm/special_functions.hpp"

// Counter-based Gaussian noise.  Every draw is a pure function of
// (seed, stream, counter), so a fixed root seed reproduces bit-identical
// samples regardless of evaluation order, thread count or platform, and
// named sub-streams (command.replica.component) are independent by
// construction.  No state is mutated between draws.
namespace afbm {

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
  return splitmix64(a ^ (b + 0x9e3779b97f4a7c15ULL + (a << 6) + (a >> 2)));
}

// FNV-1a over the label bytes, for deriving sub-streams by name.
inline std::uint64_t hash_label(std::string_view label) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : label) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

// Uniform in the open interval (0, 1): 53 random bits centered in the cell.
inline double to_unit_interval(std::uint64_t h) {
  return (double(h >> 11) + 0.5) * 0x1.0p-53;
}

}  // namespace detail

class NoiseStream {
 public:
  explicit NoiseStream(std::uint64_t seed, std::uint64_t stream = 0)
      : seed_(seed), stream_(stream) {}

  // Derived streams; chaining substream("cov-check").substream(replica)
  // yields the command.replica.component hierarchy.
  NoiseStream substream(std::string_view label) const {
    return NoiseStream(seed_, detail::mix(stream_, detail::hash_label(label)));
  }
  NoiseStream substream(std::uint64_t index) const {
    return NoiseStream(seed_, detail::mix(stream_, index));
  }

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }

  // k-th standard normal of this stream (Box-Muller on two counter draws).
  double gaussian(std::uint64_t k) const {
    const double u1 = detail::to_unit_interval(raw(2 * k));
    const double u2 = detail::to_unit_interval(raw(2 * k + 1));
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
  }

  // k-th complex normal with E[|xi|^2] = 1 and E[xi^2] = 0 (real and
  // imaginary parts independent N(0, 1/2)).
  Complex complex_gaussian(std::uint64_t k) const {
    const double u1 = detail::to_unit_interval(raw(4 * k));
    const double u2 = detail::to_unit_interval(raw(4 * k + 1));
    const double r = std::sqrt(-std::log(u1));  // |xi| for E[|xi|^2] = 1
    return std::polar(r, 2.0 * kPi * u2);
  }

 private:
  std::uint64_t raw(std::uint64_t counter) const {
    return detail::splitmix64(detail::mix(detail::mix(seed_, stream_),
                                          counter));
  }

  std::uint64_t seed_;
  std::uint64_t stream_;
};

}  // namespace afbm

#endif  // AFBM_NOISE_HPP
