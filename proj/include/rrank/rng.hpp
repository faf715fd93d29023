#pragma once

#include <cstdint>

namespace rrank {

/// splitmix64: small, fast, fully specified 64-bit generator. All Monte
/// Carlo draws go through it so results are identical across platforms,
/// compilers and thread counts.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  /// Uniform double in [0, 1), 53 random bits.
  double next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t state_;
};

/// Independent generator for one Monte Carlo sample. Seed and sample index
/// are pushed through the splitmix finalizer so neighbouring indices land in
/// unrelated regions of the state space; draws for sample i never depend on
/// how samples are scheduled across threads.
inline SplitMix64 substream(std::uint64_t seed, std::uint64_t index) {
  SplitMix64 mixer(seed ^ ((index + 1) * 0xA24BAED4963EE407ull));
  return SplitMix64(mixer.next());
}

}  // namespace rrank
