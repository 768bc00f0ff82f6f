#pragma once

#include <cstdint>

namespace matchmkt {

// Counter-based deterministic random streams. Every per-pair score is
// drawn from a stream keyed by (seed, role, i, j), so values do not
// depend on the order in which they are first requested and trials can
// run on any number of worker threads with identical results.

inline constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

inline constexpr std::uint64_t mix64(std::uint64_t x) {
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ULL;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebULL;
  x ^= x >> 31;
  return x;
}

inline constexpr std::uint64_t combine(std::uint64_t h, std::uint64_t v) {
  return mix64(h + kGolden + v);
}

enum class StreamRole : std::uint64_t {
  PreApplicant = 1,   // B_{a,j}
  PreFirm = 2,        // B_{j,a}
  PostApplicant = 3,  // A_{a,j}
  PostFirm = 4,       // A_{j,a}
  Jitter = 5,         // tie breaking for atomic score distributions
  AgentType = 6,      // hidden applicant types for mixture markets
  Internal = 7,       // instance-independent quantile estimation
};

/// SplitMix64 stream seeded from a hashed key.
class Stream {
 public:
  explicit Stream(std::uint64_t state) : state_(state) {}

  Stream(std::uint64_t seed, StreamRole role, std::uint64_t i, std::uint64_t j)
      : state_(combine(combine(combine(mix64(seed + kGolden),
                                       static_cast<std::uint64_t>(role)),
                               i),
                       j)) {}

  std::uint64_t next_u64() {
    state_ += kGolden;
    return mix64(state_);
  }

  /// Uniform in [0, 1).
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

 private:
  std::uint64_t state_;
};

}  // namespace matchmkt
