#ifndef PERIOSCOPE_RNG_HPP
#define PERIOSCOPE_RNG_HPP

#include <cmath>
#include <cstdint>

namespace perioscope {

/// Deterministic seeded generator (splitmix64 core) with per-stream
/// splitting, so replication r of a sweep draws the same numbers no matter
/// which worker runs it or in what order.
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform on (0,1); never returns an endpoint, safe under log().
  double uniform01() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Standard normal via Box-Muller (pairs cached).
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = uniform01();
    const double u2 = uniform01();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 6.283185307179586476925286766559 * u2;
    spare_ = radius * std::sin(angle);
    have_spare_ = true;
    return radius * std::cos(angle);
  }

  /// Independent child stream; stream indices need not be contiguous.
  SeededRng split(std::uint64_t stream) const {
    SeededRng mixer(state_ ^ (0xD1B54A32D192ED03ULL * (stream + 1)));
    return SeededRng(mixer.next_u64());
  }

 private:
  std::uint64_t state_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace perioscope

#endif  // PERIOSCOPE_RNG_HPP
