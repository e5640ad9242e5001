#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "rovf/types.hpp"

namespace rovf {

/// Counter-based random stream. A (seed, stream_index) pair fully determines
/// the output sequence, so parallel workers get independent, replayable
/// streams without sharing state. The core step is splitmix64: the state
/// walks a Weyl sequence and each output is a finalizing hash of the counter.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_index)
      : seed_(seed), stream_(stream_index) {
    state_ = mix(mix(seed) ^ mix(stream_index + 0x1D8E4E27C47D124FULL));
  }

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_index() const { return stream_; }

  std::uint64_t next_u64() {
    state_ += 0x9E3779B97F4A7C15ULL;
    return mix(state_);
  }

  /// Uniform on [0, 1), 53 mantissa bits.
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Standard normal via Box-Muller; the paired variate is cached.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = 1.0 - uniform();  // (0, 1], keeps log finite
    double u2 = uniform();
    double radius = std::sqrt(-2.0 * std::log(u1));
    double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
  }

  /// Inverse-CDF draw from a discrete law given its cumulative weights.
  /// Consumes exactly one uniform, so callers sharing a stream stay in sync.
  Index discrete(const std::vector<double>& cumulative) {
    if (cumulative.empty()) throw std::invalid_argument("discrete: empty cumulative table");
    double u = uniform();
    for (std::size_t i = 0; i < cumulative.size(); ++i) {
      if (u < cumulative[i]) return static_cast<Index>(i);
    }
    return static_cast<Index>(cumulative.size() - 1);
  }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ULL;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBULL;
    z ^= z >> 31;
    return z;
  }

  std::uint64_t state_ = 0;
  std::uint64_t seed_ = 0;
  std::uint64_t stream_ = 0;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

inline Vectord gaussian_vector(Index dim, RngStream& rng) {
  Vectord v(dim);
  for (Index i = 0; i < dim; ++i) v[i] = rng.normal();
  return v;
}

inline Matrixd gaussian_matrix(Index rows, Index cols, RngStream& rng) {
  Matrixd m(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) m(i, j) = rng.normal();
  return m;
}

inline Vectord random_unit_vector(Index dim, RngStream& rng) {
  Vectord v = gaussian_vector(dim, rng);
  double norm = v.norm();
  while (norm == 0.0) {  // essentially unreachable
    v = gaussian_vector(dim, rng);
    norm = v.norm();
  }
  return v / norm;
}

}  // namespace rovf
