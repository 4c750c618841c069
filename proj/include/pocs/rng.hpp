#pragma once

#include <cstdint>
#include <random>

#include "pocs/errors.hpp"
#include "pocs/types.hpp"

namespace pocs {

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace detail

/// Collapses up to three counters into a single stream id.
inline std::uint64_t mix_stream_id(std::uint64_t a, std::uint64_t b = 0, std::uint64_t c = 0) {
  std::uint64_t s = a;
  std::uint64_t h = detail::splitmix64(s);
  s = h ^ b;
  h = detail::splitmix64(s);
  s = h ^ c;
  return detail::splitmix64(s);
}

/// Deterministic random stream keyed by (master_seed, stream_id).
///
/// The same key always produces the same sample sequence, independent of
/// platform and thread schedule: the engine is the fully specified
/// std::mt19937_64 and all distributions are generated with explicit
/// arithmetic rather than the implementation-defined std:: distributions.
/// Streams are cheap; give every trial its own and never share one across
/// threads.
class RngStream {
 public:
  RngStream(std::uint64_t master_seed, std::uint64_t stream_id)
      : master_seed_(master_seed), stream_id_(stream_id), engine_(derive_seed(master_seed, stream_id)) {}

  std::uint64_t master_seed() const { return master_seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform on (0, 1]; safe as a log() argument.
  double uniform_open0() { return static_cast<double>((engine_() >> 11) + 1) * 0x1.0p-53; }

  /// Standard normal via Box-Muller; pairs are cached.
  double normal() {
    if (has_cached_) {
      has_cached_ = false;
      return cached_;
    }
    const double u1 = uniform_open0();
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    cached_ = radius * std::sin(angle);
    has_cached_ = true;
    return radius * std::cos(angle);
  }

  /// Unbiased uniform integer in [0, bound); bound >= 1.
  std::uint64_t uniform_below(std::uint64_t bound) {
    if (bound == 0) throw InvalidParameter("uniform_below: bound must be >= 1");
    const std::uint64_t threshold = (0ULL - bound) % bound;  // 2^64 mod bound
    for (;;) {
      const std::uint64_t r = engine_();
      if (r >= threshold) return r % bound;
    }
  }

 private:
  static std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t stream_id) {
    std::uint64_t s = master_seed;
    std::uint64_t h = detail::splitmix64(s);
    s = h ^ stream_id;
    h = detail::splitmix64(s);
    return detail::splitmix64(s) ^ h;
  }

  std::uint64_t master_seed_;
  std::uint64_t stream_id_;
  std::mt19937_64 engine_;
  double cached_ = 0.0;
  bool has_cached_ = false;
};

/// m x n matrix with entries N(0,1) + i N(0,1), filled row by row.
ComplexMatrix sample_complex_gaussian(RngStream& rng, Index m, Index n);

/// Exactly s nonzeros on a uniformly random size-s support, values N(0,1).
RealVector sample_sparse_signal(RngStream& rng, Index n, Index s);

}  // namespace pocs
