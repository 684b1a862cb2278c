#pragma once

#include <cstdint>

#include "scorebounds/stats.hpp"

namespace scorebounds {

/// splitmix64; cheap to seed, so every replication gets its own stream.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform on the open interval (0,1); never returns an endpoint.
  double uniform() {
    return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
  }

  double normal() { return inv_norm_cdf(uniform()); }

  int bit() { return static_cast<int>(next() >> 63); }

 private:
  std::uint64_t state_;
};

/// Stream for replication `rep` of run `seed`; order-independent across
/// reps.
inline Rng substream(std::uint64_t seed, std::uint64_t rep) {
  Rng mixer(seed ^ (rep * 0xd1342543de82ef95ULL + 0x2545f4914f6cdd1dULL));
  return Rng(mixer.next());
}

}  // namespace scorebounds
