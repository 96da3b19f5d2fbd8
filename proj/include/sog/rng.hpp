#ifndef SOG_RNG_HPP
#define SOG_RNG_HPP

#include <cstdint>

namespace sog {

// splitmix64: tiny, fast, identical on every platform. Used wherever a
// seeded stream must reproduce byte-for-byte (stochastic subcommands take an
// explicit seed).
class SplitMix64 {
public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, bound) via rejection; bound > 0.
  std::uint64_t below(std::uint64_t bound) {
    std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
    std::uint64_t x;
    do {
      x = next();
    } while (x >= limit);
    return x % bound;
  }

  int int_in(int lo, int hi) { // inclusive
    return lo + (int)below((std::uint64_t)(hi - lo + 1));
  }

  bool bernoulli(double p) {
    return (double)next() / 18446744073709551616.0 < p;
  }

private:
  std::uint64_t state_;
};

// Decorrelates per-trial streams derived from (seed, index).
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) {
  SplitMix64 s(seed ^ (0x632be59bd9b4e019ULL * (index + 1)));
  return s.next();
}

} // namespace sog

#endif
