#pragma once

#include <cstdint>
#include <initializer_list>
#include <limits>

namespace skilldepth {

// SplitMix64. Eight bytes of state, so game states that embed it stay cheap
// to clone inside tree search.
class Rng {
 public:
  using result_type = std::uint64_t;

  Rng() = default;
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1) with 53 bits of resolution.
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  // Unbiased uniform integer in [0, n). Lemire's multiply-shift with rejection.
  std::uint32_t below(std::uint32_t n) {
    std::uint64_t m = static_cast<std::uint64_t>(static_cast<std::uint32_t>((*this)() >> 32)) * n;
    auto low = static_cast<std::uint32_t>(m);
    if (low < n) {
      const std::uint32_t threshold = static_cast<std::uint32_t>(-n) % n;
      while (low < threshold) {
        m = static_cast<std::uint64_t>(static_cast<std::uint32_t>((*this)() >> 32)) * n;
        low = static_cast<std::uint32_t>(m);
      }
    }
    return static_cast<std::uint32_t>(m >> 32);
  }

  std::uint64_t state() const { return state_; }

  bool operator==(const Rng&) const = default;

 private:
  std::uint64_t state_ = 0;
};

// Order-sensitive hash of a word sequence, used to derive independent seeds
// (run seed, call index, genome, resample index, ...).
inline std::uint64_t mix_seed(std::initializer_list<std::uint64_t> words) {
  std::uint64_t h = 0x243f6a8885a308d3ULL;
  for (std::uint64_t w : words) {
    Rng r(h ^ (w + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2)));
    h = r();
  }
  return h;
}

}  // namespace skilldepth
